#pragma once

#include <memory>

#include "fsi/blocks.hpp"
#include "fsi/inner_solver.hpp"

namespace fsi {

/// Solid block solve by elimination of the velocity equations. The block is
/// split into paired velocity/displacement dofs (v_k belongs to the same node
/// and component as u_k):
///
///   [A_vv A_vu] [x_v]   [r_v]
///   [A_uv A_uu] [x_u] = [r_u]
///
/// With equal-order masses A_uu^{-1} A_uv = -dt theta I on every row where
/// A_uv is nonzero, so the reduced operator is A_vv + dt theta A_vu, i.e.
/// rho_s M + dt^2 theta^2 K.
class SolidSchurSolver {
 public:
  SolidSchurSolver(const SparseMatrix& s, std::vector<Index> v_local, std::vector<Index> u_local, double dt_theta,
                   const InnerConfig& inner);
  /// The textbook form: block [[rho_s M, dt theta K], [-dt theta M, M]] with
  /// velocity dofs first.
  static SolidSchurSolver from_matrices(const SparseMatrix& mass, const SparseMatrix& k_vu, double rho_s, double dt,
                                        double theta, const InnerConfig& inner);
  /// Monolithic solid block built by from_matrices (for reference solves).
  static SparseMatrix block_matrix(const SparseMatrix& mass, const SparseMatrix& k_vu, double rho_s, double dt,
                                   double theta);

  void apply(std::span<const double> r, std::span<double> x) const;
  Index size() const noexcept { return n_; }
  const SparseMatrix& schur() const noexcept { return schur_; }

 private:
  Index n_;
  std::vector<Index> v_, u_;
  SparseMatrix a_vu_, a_uv_, schur_;
  std::unique_ptr<InnerSolver> uu_inv_, schur_inv_;
};

struct UzawaConfig {
  double rel_reduction = 1e2;  ///< inner pressure Schur GMRES reduction
  int max_iter = 500;
  int restart = 100;
};

/// Fluid block solve by elimination of the pressure:
///   [A B] [x_v]   [r_v]
///   [C D] [x_p] = [r_p]
/// y = A^{-1} r_v, (D - C A^{-1} B) x_p = r_p - C y by GMRES preconditioned
/// with D - C diag(A)^{-1} B, x_v = A^{-1}(r_v - B x_p).
class FluidSchurSolver {
 public:
  FluidSchurSolver(const SparseMatrix& f, std::vector<Index> v_local, std::vector<Index> p_local,
                   const InnerConfig& velocity, const UzawaConfig& uzawa);
  void apply(std::span<const double> r, std::span<double> x) const;
  Index size() const noexcept { return n_; }
  int last_pressure_iterations() const noexcept { return last_iters_; }

 private:
  Index n_;
  std::vector<Index> v_, p_;
  SparseMatrix b_, c_, d_;
  std::unique_ptr<InnerSolver> a_inv_;
  std::unique_ptr<InnerSolver> approx_schur_inv_;
  bool pressure_coupled_ = false;
  UzawaConfig uzawa_;
  mutable int last_iters_ = 0;
};

struct LduConfig {
  InnerConfig mesh;
  InnerConfig solid;
  InnerConfig fluid_velocity;
  UzawaConfig uzawa;
  bool solid_schur = true;  ///< otherwise the whole S block goes to `solid`
  bool fluid_schur = true;  ///< otherwise the whole F block goes to `fluid_velocity`
};

/// Accumulated wall time of the preconditioner components.
struct ComponentTimes {
  double mesh = 0.0;
  double solid = 0.0;
  double fluid = 0.0;
};

/// Approximate block-LDU preconditioner: C_sm and the Schur perturbations
/// are dropped, giving the five-step sweep
///   x_m = M^{-1} r_m
///   x_s = S^{-1} r_s
///   x_f = F^{-1} (r_f - C_fm x_m - C_fs x_s)
///   x_s = x_s - S^{-1} C_sf x_f
///   x_m = x_m - M^{-1} C_ms x_s
class BlockLduPreconditioner {
 public:
  /// `dofs` supplies the u/v pairing of the solid block and the v/p split of
  /// the fluid block; `dt_theta` is the theta-weighted step of the Jacobian.
  BlockLduPreconditioner(BlockSystem sys, const DofMap& dofs, double dt_theta, const LduConfig& config);
  /// Generic form with caller-provided block inverses.
  BlockLduPreconditioner(BlockSystem sys, std::unique_ptr<InnerSolver> m_inv, std::unique_ptr<InnerSolver> s_inv,
                         std::unique_ptr<InnerSolver> f_inv);

  void apply(std::span<const double> r, std::span<double> x) const;
  LinearOperator as_operator() const {
    return [this](std::span<const double> r, std::span<double> x) { apply(r, x); };
  }
  const BlockSystem& system() const noexcept { return sys_; }
  const ComponentTimes& times() const noexcept { return times_; }
  void reset_times() const { times_ = {}; }

 private:
  BlockSystem sys_;
  std::unique_ptr<InnerSolver> m_inv_, s_inv_, f_inv_;
  mutable ComponentTimes times_;
};

}  // namespace fsi
