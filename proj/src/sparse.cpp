#include "fsi/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "fsi/parallel.hpp"

namespace fsi {

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
                           std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (static_cast<Index>(row_ptr_.size()) != rows_ + 1 || col_idx_.size() != values_.size() ||
      row_ptr_.back() != static_cast<Index>(col_idx_.size()))
    throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_) throw std::invalid_argument("SparseMatrix: column out of range");
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
        throw std::invalid_argument("SparseMatrix: columns must be sorted and unique");
    }
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> t) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Index> rp(rows + 1, 0), ci;
  std::vector<double> v;
  ci.reserve(t.size());
  v.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k].row < 0 || t[k].row >= rows || t[k].col < 0 || t[k].col >= cols)
      throw std::invalid_argument("from_triplets: index out of range");
    if (!ci.empty() && k > 0 && t[k].row == t[k - 1].row && t[k].col == t[k - 1].col) {
      v.back() += t[k].value;
      continue;
    }
    ci.push_back(t[k].col);
    v.push_back(t[k].value);
    ++rp[t[k].row + 1];
  }
  std::partial_sum(rp.begin(), rp.end(), rp.begin());
  return SparseMatrix(rows, cols, std::move(rp), std::move(ci), std::move(v));
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Index> rp(n + 1), ci(n);
  std::iota(rp.begin(), rp.end(), 0);
  std::iota(ci.begin(), ci.end(), 0);
  return SparseMatrix(n, n, std::move(rp), std::move(ci), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& d, double drop_tol) {
  std::vector<Triplet> t;
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = 0; j < d.cols(); ++j)
      if (std::abs(d(i, j)) > drop_tol) t.push_back({i, j, d(i, j)});
  return from_triplets(d.rows(), d.cols(), std::move(t));
}

Index SparseMatrix::find(Index i, Index j) const {
  const auto b = col_idx_.begin() + row_ptr_[i];
  const auto e = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(b, e, j);
  return (it != e && *it == j) ? static_cast<Index>(it - col_idx_.begin()) : -1;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y, int n_threads) const {
  if (static_cast<Index>(x.size()) != cols_ || static_cast<Index>(y.size()) != rows_)
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  auto rows = [&](int, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double s = 0.0;
      for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
      y[i] = s;
    }
  };
  if (n_threads <= 1 || rows_ < 2048)
    rows(0, 0, rows_);
  else
    parallel_chunks(n_threads, rows_, rows);
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[i] = coeff(i, i);
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Index> rp(cols_ + 1, 0);
  for (Index c : col_idx_) ++rp[c + 1];
  std::partial_sum(rp.begin(), rp.end(), rp.begin());
  std::vector<Index> ci(nnz()), pos(rp.begin(), rp.end() - 1);
  std::vector<double> v(nnz());
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index p = pos[col_idx_[k]]++;
      ci[p] = i;
      v[p] = values_[k];
    }
  return SparseMatrix(cols_, rows_, std::move(rp), std::move(ci), std::move(v));
}

SparseMatrix SparseMatrix::submatrix(std::span<const Index> rows, std::span<const Index> cols) const {
  std::vector<Index> col_map(cols_, -1);
  for (std::size_t j = 0; j < cols.size(); ++j) col_map[cols[j]] = static_cast<Index>(j);
  std::vector<Index> rp(rows.size() + 1, 0), ci;
  std::vector<double> v;
  std::vector<std::pair<Index, double>> row;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    row.clear();
    const Index r = rows[i];
    for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (const Index c = col_map[col_idx_[k]]; c >= 0) row.emplace_back(c, values_[k]);
    std::sort(row.begin(), row.end());
    for (auto& [c, x] : row) {
      ci.push_back(c);
      v.push_back(x);
    }
    rp[i + 1] = static_cast<Index>(ci.size());
  }
  return SparseMatrix(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()), std::move(rp), std::move(ci),
                      std::move(v));
}

void SparseMatrix::set_identity_row(Index i) {
  bool has_diag = false;
  for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
    values_[k] = col_idx_[k] == i ? 1.0 : 0.0;
    has_diag |= col_idx_[k] == i;
  }
  if (!has_diag) throw std::logic_error("set_identity_row: diagonal not in sparsity pattern");
}

Index SparseMatrix::count_nonzero_values() const {
  return std::count_if(values_.begin(), values_.end(), [](double x) { return x != 0.0; });
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(nnz());
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.emplace_back(i, col_idx_[k], values_[k]);
  Eigen::SparseMatrix<double> m(rows_, cols_);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) += values_[k];
  return d;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
  std::vector<Index> rp(a.rows() + 1, 0), ci;
  std::vector<double> v;
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<Index> marker(b.cols(), -1), cols;
  for (Index i = 0; i < a.rows(); ++i) {
    cols.clear();
    for (Index ka = a.row_ptr()[i]; ka < a.row_ptr()[i + 1]; ++ka) {
      const Index k = a.col_idx()[ka];
      const double av = a.values()[ka];
      for (Index kb = b.row_ptr()[k]; kb < b.row_ptr()[k + 1]; ++kb) {
        const Index j = b.col_idx()[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          cols.push_back(j);
        }
        acc[j] += av * b.values()[kb];
      }
    }
    std::sort(cols.begin(), cols.end());
    for (Index j : cols) {
      ci.push_back(j);
      v.push_back(acc[j]);
    }
    rp[i + 1] = static_cast<Index>(ci.size());
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(rp), std::move(ci), std::move(v));
}

SparseMatrix add(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("add: dimension mismatch");
  std::vector<Index> rp(a.rows() + 1, 0), ci;
  std::vector<double> v;
  for (Index i = 0; i < a.rows(); ++i) {
    Index ka = a.row_ptr()[i], kb = b.row_ptr()[i];
    const Index ea = a.row_ptr()[i + 1], eb = b.row_ptr()[i + 1];
    while (ka < ea || kb < eb) {
      const Index ca = ka < ea ? a.col_idx()[ka] : a.cols();
      const Index cb = kb < eb ? b.col_idx()[kb] : b.cols();
      if (ca == cb) {
        ci.push_back(ca);
        v.push_back(alpha * a.values()[ka++] + beta * b.values()[kb++]);
      } else if (ca < cb) {
        ci.push_back(ca);
        v.push_back(alpha * a.values()[ka++]);
      } else {
        ci.push_back(cb);
        v.push_back(beta * b.values()[kb++]);
      }
    }
    rp[i + 1] = static_cast<Index>(ci.size());
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(rp), std::move(ci), std::move(v));
}

SparseMatrix scale_rows(const SparseMatrix& a, std::span<const double> d) {
  SparseMatrix out = a;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) out.values()[k] *= d[i];
  return out;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      out << i + 1 << ' ' << a.col_idx()[k] + 1 << ' ' << a.values()[k] << '\n';
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw ConfigError("matrix market: missing banner");
  if (line.find("coordinate") == std::string::npos || line.find("real") == std::string::npos ||
      line.find("general") == std::string::npos)
    throw ConfigError("matrix market: only 'coordinate real general' is supported");
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  Index rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) throw ConfigError("matrix market: bad size line");
  }
  std::vector<Triplet> t;
  t.reserve(nnz);
  for (Index k = 0; k < nnz; ++k) {
    Triplet e{};
    if (!(in >> e.row >> e.col >> e.value)) throw ConfigError("matrix market: truncated entry list");
    --e.row;
    --e.col;
    t.push_back(e);
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double norm_2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace fsi
