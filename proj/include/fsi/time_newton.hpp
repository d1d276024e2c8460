#pragma once

#include <functional>
#include <string>

#include "fsi/assembly.hpp"
#include "fsi/linear_solver.hpp"

namespace fsi {

enum class ThetaVariant : std::uint8_t { Implicit, CrankNicolson, ShiftedCN, Custom };

const char* to_string(ThetaVariant v);

/// One-step theta scheme a(u^n - u^{n-1}) + dt theta A(u^n) + dt (1 - theta) A(u^{n-1}) = f.
class ThetaScheme {
 public:
  ThetaScheme(ThetaVariant variant, double dt, double custom_theta = 0.5);
  /// "implicit", "cn", "shifted_cn" or a number in [0, 1].
  static ThetaScheme parse(const std::string& text, double dt);

  ThetaVariant variant() const noexcept { return variant_; }
  double dt() const noexcept { return dt_; }
  /// Shifted Crank-Nicolson recomputes theta = 0.5 + dt.
  void set_dt(double dt);
  double theta() const noexcept;
  ThetaStep step() const noexcept { return {dt_, theta()}; }

 private:
  ThetaVariant variant_;
  double dt_;
  double custom_;
};

/// One theta step of the scalar ODE a (u' ) + A(u) = 0 with a = 1, solved by
/// Newton with the same stopping rule as the FSI loop. Used to validate the
/// time discretization in isolation.
double theta_step_scalar(double u_prev, const std::function<double(double)>& op,
                         const std::function<double(double)>& d_op, const ThetaScheme& scheme);

struct NewtonOptions {
  double tolerance = 1e-6;         ///< relative to |r_0|_inf
  int max_iter = 30;
  double reassembly_factor = 0.1;  ///< reassemble when |r_k| > factor |r_{k-1}|
  bool force_full = false;         ///< reassemble at every iteration
  /// Start a step with the Jacobian of the previous step when the step size
  /// is unchanged; otherwise the first iteration always assembles.
  bool reuse_across_steps = true;
};

struct NewtonStats {
  int iterations = 0;
  std::vector<double> residual_history;  ///< inf-norms, led by |r_0|
  int reassemblies = 0;
  std::vector<int> gmres_iterations;     ///< per linear solve
  bool converged = false;

  double mean_gmres() const;
};

class NewtonError : public Error {
 public:
  NewtonError(const std::string& what, NewtonStats stats) : Error(what), stats_(std::move(stats)) {}
  const NewtonStats& stats() const noexcept { return stats_; }

 private:
  NewtonStats stats_;
};

/// Solves r(state) = 0 for the step prev -> state. Dirichlet values must be
/// in state already; the first iteration always assembles the Jacobian.
NewtonStats newton_solve(FsiState& state, const FsiState& prev, ThetaStep step, const FsiAssembler& assembler,
                         LinearSolver& solver, const NewtonOptions& options = {});

/// One time step: predictor = prev, Dirichlet data at t_new, Newton solve.
FsiState advance(const FsiState& prev, double t_new, const ThetaScheme& scheme, const FsiAssembler& assembler,
                 LinearSolver& solver, const InflowSpec& inflow, const NewtonOptions& options,
                 NewtonStats* stats = nullptr);

}  // namespace fsi
