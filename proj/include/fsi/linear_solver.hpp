#pragma once

#include <memory>

#include "fsi/block_precond.hpp"

namespace fsi {

enum class LinearMethod : std::uint8_t {
  Direct,    ///< sparse LU of the whole Jacobian
  GmresLdu,  ///< GMRES right-preconditioned by the block-LDU sweep
  Gmres,     ///< unpreconditioned GMRES (reference only)
};

const char* to_string(LinearMethod m);
LinearMethod linear_method_from_string(const std::string& s);

struct LinearSolverConfig {
  LinearMethod method = LinearMethod::GmresLdu;
  double rel_reduction = 1e3;
  int max_iter = 1000;
  int restart = 100;
  int n_threads = 1;
  LduConfig ldu;
};

/// Solves J dx = rhs for the Newton loop. setup() factors or builds the
/// preconditioner for a new Jacobian; solve() reuses it.
class LinearSolver {
 public:
  LinearSolver(const DofMap& dofs, LinearSolverConfig config);
  ~LinearSolver();

  void setup(const SparseMatrix& jacobian, double dt_theta);
  bool ready() const noexcept { return jacobian_.rows() > 0; }
  /// dt theta passed to the last setup().
  double setup_dt_theta() const noexcept { return dt_theta_; }
  std::vector<double> solve(std::span<const double> rhs);

  const LinearSolverConfig& config() const noexcept { return config_; }
  int last_iterations() const noexcept { return last_iters_; }
  /// Preconditioner component times accumulated since the last setup().
  ComponentTimes component_times() const;

 private:
  const DofMap* dofs_;
  LinearSolverConfig config_;
  SparseMatrix jacobian_;
  std::unique_ptr<InnerSolver> direct_;
  std::unique_ptr<BlockLduPreconditioner> ldu_;
  double dt_theta_ = 0.0;
  int last_iters_ = 0;
};

}  // namespace fsi
