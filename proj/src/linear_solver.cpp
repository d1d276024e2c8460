#include "fsi/linear_solver.hpp"

namespace fsi {

const char* to_string(LinearMethod m) {
  switch (m) {
    case LinearMethod::Direct: return "direct";
    case LinearMethod::GmresLdu: return "gmres_ldu";
    case LinearMethod::Gmres: return "gmres";
  }
  return "?";
}

LinearMethod linear_method_from_string(const std::string& s) {
  if (s == "direct") return LinearMethod::Direct;
  if (s == "gmres_ldu") return LinearMethod::GmresLdu;
  if (s == "gmres") return LinearMethod::Gmres;
  throw ConfigError("unknown linear solver '" + s + "' (expected direct, gmres_ldu or gmres)");
}

LinearSolver::LinearSolver(const DofMap& dofs, LinearSolverConfig config) : dofs_(&dofs), config_(config) {}

LinearSolver::~LinearSolver() = default;

void LinearSolver::setup(const SparseMatrix& jacobian, double dt_theta) {
  jacobian_ = jacobian;
  dt_theta_ = dt_theta;
  direct_.reset();
  ldu_.reset();
  switch (config_.method) {
    case LinearMethod::Direct: direct_ = make_inner_solver(jacobian_, InnerConfig{}, "J"); break;
    case LinearMethod::GmresLdu:
      ldu_ = std::make_unique<BlockLduPreconditioner>(extract_blocks(jacobian_, *dofs_), *dofs_, dt_theta,
                                                      config_.ldu);
      break;
    case LinearMethod::Gmres: break;
  }
}

std::vector<double> LinearSolver::solve(std::span<const double> rhs) {
  if (!ready()) throw Error("linear solver used before setup()");
  // Constrained rows are identity rows; copy their exact solution so
  // rounding in the factorization or Krylov basis cannot move them.
  auto pin = [&](std::vector<double>& x) {
    const auto& mask = dofs_->constrained_mask();
    for (std::size_t i = 0; i < x.size(); ++i)
      if (mask[i]) x[i] = rhs[i];
  };
  if (direct_) {
    last_iters_ = 0;
    auto x = direct_->solve(rhs);
    pin(x);
    return x;
  }
  const auto op = as_operator(jacobian_, config_.n_threads);
  const LinearOperator pre = ldu_ ? ldu_->as_operator() : LinearOperator{};
  try {
    auto res = gmres(op, pre, rhs, GmresOptions{config_.rel_reduction, config_.max_iter, config_.restart});
    last_iters_ = res.iterations;
    pin(res.x);
    return res.x;
  } catch (const ConvergenceError& e) {
    GmresResult best = e.best();
    last_iters_ = best.iterations;
    pin(best.x);
    throw ConvergenceError(e.what(), std::move(best));
  }
}

ComponentTimes LinearSolver::component_times() const { return ldu_ ? ldu_->times() : ComponentTimes{}; }

}  // namespace fsi
