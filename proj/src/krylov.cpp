#include "fsi/krylov.hpp"

#include <cmath>

namespace fsi {

LinearOperator as_operator(const SparseMatrix& a, int n_threads) {
  return [&a, n_threads](std::span<const double> x, std::span<double> y) { a.multiply(x, y, n_threads); };
}

GmresResult gmres(const LinearOperator& a, const LinearOperator& precond, std::span<const double> b,
                  const GmresOptions& options, std::span<const double> x0) {
  if (!(options.rel_reduction > 0.0)) throw ConfigError("GMRES reduction must be positive");
  if (options.max_iter < 1) throw ConfigError("GMRES max_iter must be at least 1");
  const std::size_t n = b.size();
  GmresResult res;
  res.x.assign(n, 0.0);
  if (!x0.empty()) {
    if (x0.size() != n) throw ConfigError("GMRES initial guess has the wrong length");
    std::copy(x0.begin(), x0.end(), res.x.begin());
  }
  const double bnorm = norm_2(b);
  const double target = bnorm / options.rel_reduction;
  std::vector<double> r(n), tmp(n);
  auto true_residual = [&]() {
    a(res.x, tmp);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
    return norm_2(r);
  };
  double beta = true_residual();
  res.residual_history.push_back(beta);
  if (beta <= target || bnorm == 0.0) {
    if (bnorm == 0.0) std::fill(res.x.begin(), res.x.end(), 0.0);
    res.converged = true;
    return res;
  }
  const int m = options.restart > 0 ? options.restart : options.max_iter;
  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<std::vector<double>> z(precond ? m : 0, std::vector<double>(n));
  std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1), y(m);
  std::vector<double> best_x = res.x;
  double best_norm = beta;

  while (true) {
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int j = 0;
    while (j < m && res.iterations < options.max_iter) {
      std::span<const double> dir = v[j];
      if (precond) {
        precond(v[j], z[j]);
        dir = z[j];
      }
      a(dir, v[j + 1]);
      auto& w = v[j + 1];
      for (int i = 0; i <= j; ++i) {
        h[i][j] = dot(w, v[i]);
        axpy(-h[i][j], v[i], w);
      }
      h[j + 1][j] = norm_2(w);
      if (h[j + 1][j] > 0.0)
        for (double& wi : w) wi /= h[j + 1][j];
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double den = std::hypot(h[j][j], h[j + 1][j]);
      cs[j] = den > 0.0 ? h[j][j] / den : 1.0;
      sn[j] = den > 0.0 ? h[j + 1][j] / den : 0.0;
      h[j][j] = den;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++j;
      ++res.iterations;
      const double est = std::abs(g[j]);
      res.residual_history.push_back(est);
      if (est <= target || den == 0.0) break;
    }
    // Back substitution and update.
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j; ++k) s -= h[i][k] * y[k];
      y[i] = h[i][i] != 0.0 ? s / h[i][i] : 0.0;
    }
    for (int i = 0; i < j; ++i) axpy(y[i], precond ? std::span<const double>(z[i]) : std::span<const double>(v[i]), res.x);
    beta = true_residual();
    if (beta < best_norm) {
      best_norm = beta;
      best_x = res.x;
    }
    if (beta <= target) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= options.max_iter) {
      GmresResult best = res;
      best.x = best_x;
      throw ConvergenceError("GMRES did not reach the requested reduction in " + std::to_string(options.max_iter) +
                                 " iterations (residual " + std::to_string(best_norm) + ", target " +
                                 std::to_string(target) + ")",
                             std::move(best));
    }
  }
}

Ilu0::Ilu0(const SparseMatrix& a) : lu_(a) {
  const Index n = a.rows();
  if (a.cols() != n) throw FactorizationError("ILU(0) needs a square matrix");
  const auto& ptr = lu_.row_ptr();
  const auto& col = lu_.col_idx();
  auto& val = lu_.values();
  diag_.assign(n, -1);
  for (Index i = 0; i < n; ++i) diag_[i] = lu_.find(i, i);
  std::vector<Index> where(n, -1);
  for (Index i = 0; i < n; ++i) {
    if (diag_[i] < 0) throw FactorizationError("ILU(0): missing diagonal in row " + std::to_string(i));
    for (Index p = ptr[i]; p < ptr[i + 1]; ++p) where[col[p]] = p;
    for (Index p = ptr[i]; p < ptr[i + 1] && col[p] < i; ++p) {
      const Index k = col[p];
      val[p] /= val[diag_[k]];
      for (Index q = diag_[k] + 1; q < ptr[k + 1]; ++q) {
        const Index w = where[col[q]];
        if (w >= 0) val[w] -= val[p] * val[q];
      }
    }
    for (Index p = ptr[i]; p < ptr[i + 1]; ++p) where[col[p]] = -1;
    if (val[diag_[i]] == 0.0) throw FactorizationError("ILU(0): zero pivot in row " + std::to_string(i));
  }
}

void Ilu0::apply(std::span<const double> r, std::span<double> z) const {
  const Index n = lu_.rows();
  const auto& ptr = lu_.row_ptr();
  const auto& col = lu_.col_idx();
  const auto& val = lu_.values();
  for (Index i = 0; i < n; ++i) {
    double s = r[i];
    for (Index p = ptr[i]; p < diag_[i]; ++p) s -= val[p] * z[col[p]];
    z[i] = s;
  }
  for (Index i = n - 1; i >= 0; --i) {
    double s = z[i];
    for (Index p = diag_[i] + 1; p < ptr[i + 1]; ++p) s -= val[p] * z[col[p]];
    z[i] = s / val[diag_[i]];
  }
}

}  // namespace fsi
