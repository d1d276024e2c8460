#include <doctest.h>

#include <cmath>

#include "fsi/runner.hpp"

using namespace fsi;

TEST_CASE("theta variants") {
  CHECK(ThetaScheme::parse("implicit", 0.01).theta() == 1.0);
  CHECK(ThetaScheme::parse("cn", 0.01).theta() == 0.5);
  CHECK(ThetaScheme::parse("shifted_cn", 0.005).theta() == doctest::Approx(0.505).epsilon(1e-15));
  CHECK(ThetaScheme::parse("0.7", 0.01).theta() == 0.7);
  ThetaScheme s(ThetaVariant::ShiftedCN, 0.01);
  s.set_dt(0.05);
  CHECK(s.theta() == doctest::Approx(0.55).epsilon(1e-15));
  CHECK_THROWS_AS(ThetaScheme::parse("1.5", 0.01), ConfigError);
  CHECK_THROWS_AS(ThetaScheme::parse("bdf2", 0.01), ConfigError);
}

TEST_CASE("implicit Euler on u' = -u") {
  const auto op = [](double u) { return u; };
  const auto dop = [](double) { return 1.0; };
  const double dt = 0.1;
  CHECK(theta_step_scalar(2.0, op, dop, ThetaScheme(ThetaVariant::Implicit, dt)) ==
        doctest::Approx(2.0 / (1 + dt)).epsilon(1e-14));
}

TEST_CASE("Crank-Nicolson is second order on u' = -u") {
  const auto op = [](double u) { return u; };
  const auto dop = [](double) { return 1.0; };
  auto error = [&](int n) {
    const ThetaScheme s(ThetaVariant::CrankNicolson, 1.0 / n);
    double u = 1.0;
    for (int k = 0; k < n; ++k) u = theta_step_scalar(u, op, dop, s);
    return std::abs(u - std::exp(-1.0));
  };
  const double ratio = error(10) / error(20);
  CHECK(ratio > 3.8);
  CHECK(ratio < 4.2);
  const auto cubic = [](double u) { return u * u * u; };
  const auto dcubic = [](double u) { return 3 * u * u; };
  const double u1 = theta_step_scalar(1.0, cubic, dcubic, ThetaScheme(ThetaVariant::Implicit, 0.1));
  CHECK(u1 - 1.0 + 0.1 * u1 * u1 * u1 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero residual returns without iterating") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  const FsiAssembler a(mesh, dofs, MaterialParams{});
  LinearSolver ls(dofs, LinearSolverConfig{});
  FsiState s = FsiState::zero(dofs);
  const NewtonStats st = newton_solve(s, FsiState::zero(dofs), ThetaStep{0.005, 0.505}, a, ls);
  CHECK(st.iterations == 0);
  CHECK(st.converged);
  CHECK(!ls.ready());
}

TEST_CASE("zero inflow keeps the rest state") {
  SolverConfig c;
  c.mean_velocity = 0.0;
  c.end_time = 0.05;
  Simulation sim(c);
  for (int k = 0; k < 10; ++k) {
    const NewtonStats st = sim.step(c.dt);
    CHECK(st.iterations == 0);
  }
  CHECK(norm_inf(sim.state().x) == 0.0);
}

TEST_CASE("full Newton converges quadratically") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  const FsiAssembler a(mesh, dofs, MaterialParams{});
  LinearSolverConfig lc;
  lc.method = LinearMethod::Direct;
  LinearSolver ls(dofs, lc);
  NewtonOptions o;
  o.force_full = true;
  o.tolerance = 1e-9;
  const FsiState prev = FsiState::zero(dofs);
  FsiState s = prev;
  s.t = 2.0;
  inject_dirichlet(s.x, dofs, s.t, InflowSpec{});
  const NewtonStats st = newton_solve(s, prev, ThetaStep{1.0, 1.0}, a, ls, o);
  const auto& h = st.residual_history;
  CHECK(st.converged);
  REQUIRE(h.size() >= 4);
  // the final three residuals satisfy r_{k+1} <= C r_k^2 with C = 1
  for (std::size_t k = h.size() - 3; k + 1 < h.size(); ++k) CHECK(h[k + 1] <= 1.0 * h[k] * h[k]);
  CHECK(st.reassemblies == st.iterations);
}
