#include "fsi/time_newton.hpp"

#include <cmath>
#include <numeric>

namespace fsi {

const char* to_string(ThetaVariant v) {
  switch (v) {
    case ThetaVariant::Implicit: return "implicit";
    case ThetaVariant::CrankNicolson: return "cn";
    case ThetaVariant::ShiftedCN: return "shifted_cn";
    case ThetaVariant::Custom: return "custom";
  }
  return "?";
}

ThetaScheme::ThetaScheme(ThetaVariant variant, double dt, double custom_theta)
    : variant_(variant), dt_(dt), custom_(custom_theta) {
  set_dt(dt);
  if (variant_ == ThetaVariant::Custom && !(custom_ >= 0.0 && custom_ <= 1.0))
    throw ConfigError("'theta' must lie in [0, 1]");
}

ThetaScheme ThetaScheme::parse(const std::string& text, double dt) {
  if (text == "implicit") return {ThetaVariant::Implicit, dt};
  if (text == "cn" || text == "crank_nicolson") return {ThetaVariant::CrankNicolson, dt};
  if (text == "shifted_cn") return {ThetaVariant::ShiftedCN, dt};
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw ConfigError("'theta' must be implicit, cn, shifted_cn or a number, got '" + text + "'");
  return {ThetaVariant::Custom, dt, v};
}

void ThetaScheme::set_dt(double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  dt_ = dt;
  if (variant_ == ThetaVariant::ShiftedCN && theta() > 1.0) throw ConfigError("'dt' must not exceed 0.5 with shifted Crank-Nicolson");
}

double ThetaScheme::theta() const noexcept {
  switch (variant_) {
    case ThetaVariant::Implicit: return 1.0;
    case ThetaVariant::CrankNicolson: return 0.5;
    case ThetaVariant::ShiftedCN: return 0.5 + dt_;
    case ThetaVariant::Custom: return custom_;
  }
  return 1.0;
}

double theta_step_scalar(double u_prev, const std::function<double(double)>& op,
                         const std::function<double(double)>& d_op, const ThetaScheme& scheme) {
  const double dt = scheme.dt();
  const double th = scheme.theta();
  const double a_prev = op(u_prev);
  auto residual = [&](double u) { return (u - u_prev) + dt * th * op(u) + dt * (1.0 - th) * a_prev; };
  double u = u_prev;
  const double r0 = std::abs(residual(u));
  if (r0 == 0.0) return u;
  for (int k = 0; k < 30; ++k) {
    u -= residual(u) / (1.0 + dt * th * d_op(u));
    if (std::abs(residual(u)) < 1e-12 * r0) return u;
  }
  throw Error("scalar theta step did not converge");
}

double NewtonStats::mean_gmres() const {
  if (gmres_iterations.empty()) return 0.0;
  return std::accumulate(gmres_iterations.begin(), gmres_iterations.end(), 0.0) / gmres_iterations.size();
}

NewtonStats newton_solve(FsiState& state, const FsiState& prev, ThetaStep step, const FsiAssembler& assembler,
                         LinearSolver& solver, const NewtonOptions& options) {
  NewtonStats stats;
  auto r = assembler.residual(state, prev, step);
  const double r0 = norm_inf(r);
  stats.residual_history.push_back(r0);
  if (r0 == 0.0) {
    stats.converged = true;
    return stats;
  }
  bool reassemble = !(options.reuse_across_steps && solver.ready() &&
                      solver.setup_dt_theta() == step.dt * step.theta);
  double last = r0;
  for (int k = 1; k <= options.max_iter; ++k) {
    if (reassemble || options.force_full || !solver.ready()) {
      solver.setup(assembler.jacobian(state, prev, step), step.dt * step.theta);
      ++stats.reassemblies;
    }
    for (double& ri : r) ri = -ri;
    std::vector<double> dx;
    try {
      dx = solver.solve(r);
      stats.gmres_iterations.push_back(solver.last_iterations());
    } catch (const ConvergenceError& e) {
      // An inexact step is still a descent candidate; the residual check
      // below decides whether the Jacobian has to be rebuilt.
      dx = e.best().x;
      stats.gmres_iterations.push_back(e.best().iterations);
    }
    axpy(1.0, dx, state.x);
    r = assembler.residual(state, prev, step);
    const double rn = norm_inf(r);
    stats.residual_history.push_back(rn);
    stats.iterations = k;
    if (!std::isfinite(rn)) throw NewtonError("Newton residual is not finite", stats);
    if (rn < options.tolerance * r0) {
      stats.converged = true;
      return stats;
    }
    reassemble = rn > options.reassembly_factor * last;
    last = rn;
  }
  throw NewtonError("Newton did not converge in " + std::to_string(options.max_iter) + " iterations (residual " +
                        std::to_string(last / r0) + " relative)",
                    stats);
}

FsiState advance(const FsiState& prev, double t_new, const ThetaScheme& scheme, const FsiAssembler& assembler,
                 LinearSolver& solver, const InflowSpec& inflow, const NewtonOptions& options, NewtonStats* stats) {
  FsiState state = prev;
  state.t = t_new;
  inject_dirichlet(state.x, assembler.dofs(), t_new, inflow);
  auto s = newton_solve(state, prev, scheme.step(), assembler, solver, options);
  if (stats) *stats = std::move(s);
  return state;
}

}  // namespace fsi
