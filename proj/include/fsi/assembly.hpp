#pragma once

#include <vector>

#include "fsi/dofmap.hpp"
#include "fsi/inflow.hpp"
#include "fsi/kinematics.hpp"
#include "fsi/sparse.hpp"

namespace fsi {

/// Monolithic state vector (u, v, p) at time t in DofMap order.
struct FsiState {
  double t = 0.0;
  std::vector<double> x;

  static FsiState zero(const DofMap& dofs, double t = 0.0) { return {t, std::vector<double>(dofs.n_dofs(), 0.0)}; }
};

/// One step of the theta scheme.
struct ThetaStep {
  double dt = 0.0;
  double theta = 0.5;
};

struct AssemblyOptions {
  int n_threads = 1;
  /// Merge per-worker buffers in fixed worker order; otherwise workers merge
  /// as they finish, under a per-row-block lock.
  bool deterministic_merge = true;
  /// Optional cell -> worker assignment (e.g. from a partition). Empty means
  /// contiguous chunks of the cell range.
  std::vector<int> cell_worker;
};

/// Inflow data used to set Dirichlet values.
struct InflowSpec {
  Benchmark benchmark = Benchmark::Fsi2;
  double mean_velocity = 1.0;
};

/// Assembles the residual and Jacobian of one theta step of the monolithic
/// ALE system. Fluid cells carry the ALE momentum/continuity terms and the
/// harmonic mesh-motion equation; Solid cells the St. Venant-Kirchhoff
/// elastodynamics. Outflow facets carry the do-nothing correction term.
class FsiAssembler {
 public:
  FsiAssembler(const Mesh& mesh, const DofMap& dofs, MaterialParams params, AssemblyOptions options = {});

  const Mesh& mesh() const noexcept { return *mesh_; }
  const DofMap& dofs() const noexcept { return *dofs_; }
  const MaterialParams& params() const noexcept { return params_; }
  const AssemblyOptions& options() const noexcept { return options_; }
  void set_threads(int n);
  void set_deterministic_merge(bool on) { options_.deterministic_merge = on; }
  void set_cell_worker(std::vector<int> owner) { options_.cell_worker = std::move(owner); }

  /// Structural sparsity of the Jacobian.
  const SparseMatrix& pattern() const noexcept { return pattern_; }

  /// Residual of the step prev -> state. With `constrained` the rows of
  /// Dirichlet dofs are zeroed.
  std::vector<double> residual(const FsiState& state, const FsiState& prev, ThetaStep step,
                               bool constrained = true) const;
  /// Exact Jacobian of residual() with respect to state.x. With
  /// `constrained` the rows of Dirichlet dofs are replaced by identity rows.
  SparseMatrix jacobian(const FsiState& state, const FsiState& prev, ThetaStep step, bool constrained = true) const;

  /// Jacobian assembled with a different material (the residual stays
  /// untouched); used to exercise the finite-difference check.
  SparseMatrix jacobian_with(const MaterialParams& params, const FsiState& state, const FsiState& prev,
                             ThetaStep step, bool constrained = true) const;

  /// Smallest det(I + grad u) over all quadrature points of Fluid cells and
  /// the cell where it occurs.
  std::pair<double, Index> min_jacobian(const FsiState& state) const;

 private:
  template <int Dim>
  void assemble(const MaterialParams& params, const FsiState& state, const FsiState& prev, ThetaStep step,
                std::vector<double>* residual, SparseMatrix* jacobian) const;
  std::vector<std::vector<Index>> worker_cells() const;
  void build_pattern();

  const Mesh* mesh_;
  const DofMap* dofs_;
  MaterialParams params_;
  AssemblyOptions options_;
  SparseMatrix pattern_;
  std::vector<std::vector<Index>> cell_outflow_faces_;
};

/// Writes Dirichlet values at time `t` into x (inflow profile on inflow
/// dofs, zero elsewhere).
void inject_dirichlet(std::vector<double>& x, const DofMap& dofs, double t, const InflowSpec& inflow);

/// Replaces Dirichlet rows by identity rows and zeroes their right-hand side.
void apply_dirichlet(SparseMatrix& a, std::vector<double>& rhs, const DofMap& dofs);

/// Largest relative deviation between the assembled Jacobian and a central
/// finite-difference Jacobian of the residual, taken column by column over
/// `columns` (all columns if empty). Relative to the largest entry of the
/// finite-difference column.
struct FdCheckResult {
  double max_rel_error = 0.0;
  Index worst_column = -1;
};
FdCheckResult finite_difference_check(const FsiAssembler& assembler, const SparseMatrix& jacobian,
                                      const FsiState& state, const FsiState& prev, ThetaStep step,
                                      std::span<const Index> columns = {}, double h = 1e-7);

/// Relative error |(r(U + h dU) - r(U - h dU)) / 2h - J dU|_inf / |J dU|_inf
/// of unconstrained residuals along `direction`.
double directional_fd_error(const FsiAssembler& assembler, const SparseMatrix& jacobian, const FsiState& state,
                            const FsiState& prev, ThetaStep step, std::span<const double> direction,
                            double h = 1e-6);

}  // namespace fsi
