#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fsi/sparse.hpp"

namespace fsi {

/// y = op(x); x and y have equal length.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct GmresOptions {
  double rel_reduction = 1e3;  ///< stop when |b - A x|_2 <= |b|_2 / rel_reduction
  int max_iter = 1000;         ///< total Arnoldi steps over all cycles
  int restart = 100;           ///< 0 disables restarting
};

struct GmresResult {
  std::vector<double> x;
  int iterations = 0;
  bool converged = false;
  /// |r|_2 after every Arnoldi step, led by the initial residual.
  std::vector<double> residual_history;
};

/// Thrown when GMRES exhausts max_iter; carries the best iterate found.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, GmresResult best) : Error(what), best_(std::move(best)) {}
  const GmresResult& best() const noexcept { return best_; }

 private:
  GmresResult best_;
};

/// Right-preconditioned flexible GMRES. The preconditioner may change from
/// one application to the next (inner Krylov solves), so the preconditioned
/// directions are stored. An empty `precond` means no preconditioning.
GmresResult gmres(const LinearOperator& a, const LinearOperator& precond, std::span<const double> b,
                  const GmresOptions& options = {}, std::span<const double> x0 = {});

/// Matrix-vector product as a LinearOperator.
LinearOperator as_operator(const SparseMatrix& a, int n_threads = 1);

/// Incomplete LU factorization with zero fill-in.
class Ilu0 {
 public:
  explicit Ilu0(const SparseMatrix& a);
  void apply(std::span<const double> r, std::span<double> z) const;
  Index size() const noexcept { return lu_.rows(); }

 private:
  SparseMatrix lu_;
  std::vector<Index> diag_;
};

}  // namespace fsi
