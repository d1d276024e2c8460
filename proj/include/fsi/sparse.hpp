#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <span>
#include <vector>

#include "fsi/common.hpp"

namespace fsi {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
               std::vector<double> values);

  /// Duplicates are summed; explicit zeros are kept (they are part of the pattern).
  static SparseMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(Index n);
  static SparseMatrix from_dense(const Eigen::MatrixXd& dense, double drop_tol = 0.0);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index nnz() const noexcept { return static_cast<Index>(col_idx_.size()); }
  const std::vector<Index>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<Index>& col_idx() const noexcept { return col_idx_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  /// Position of (i, j) in the value array or -1.
  Index find(Index i, Index j) const;
  double coeff(Index i, Index j) const {
    const Index k = find(i, j);
    return k < 0 ? 0.0 : values_[k];
  }

  /// y = A x, row ranges split over `n_threads` workers.
  void multiply(std::span<const double> x, std::span<double> y, int n_threads = 1) const;
  std::vector<double> operator*(std::span<const double> x) const;

  std::vector<double> diagonal() const;
  SparseMatrix transpose() const;
  /// Rows/columns selected by (sorted or unsorted) global index lists.
  SparseMatrix submatrix(std::span<const Index> rows, std::span<const Index> cols) const;
  /// Zero row i except a unit diagonal (the diagonal must be in the pattern).
  void set_identity_row(Index i);
  void set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }
  /// Number of stored entries with a nonzero value.
  Index count_nonzero_values() const;

  Eigen::SparseMatrix<double> to_eigen() const;
  Eigen::MatrixXd to_dense() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// C = A B.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
/// C = alpha A + beta B (union of patterns).
SparseMatrix add(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);
/// A with row i scaled by d[i].
SparseMatrix scale_rows(const SparseMatrix& a, std::span<const double> d);

/// Coordinate-format text (MatrixMarket "coordinate real general", 1-based).
void write_matrix_market(std::ostream& out, const SparseMatrix& a);
SparseMatrix read_matrix_market(std::istream& in);

double norm_inf(std::span<const double> x);
double norm_2(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace fsi
