#include <doctest.h>

#include <cmath>
#include <random>

#include "fsi/functionals.hpp"

using namespace fsi;

TEST_CASE("inflow profile") {
  const Point mid{0.0, fsi2::kHeight / 2, 0.0};
  CHECK(inflow_profile(2.0, mid, Benchmark::Fsi2, 1.0)[0] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(inflow_profile(5.0, mid, Benchmark::Fsi2, 1.0)[0] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(inflow_profile(3.0, {0, 0, 0}, Benchmark::Fsi2, 1.0)[0] == 0.0);
  CHECK(inflow_profile(3.0, {0, 0, 0.1}, Benchmark::Box3d, 3.0)[0] == 0.0);
  CHECK(inflow_profile(0.0, mid, Benchmark::Fsi2, 1.0)[0] == 0.0);
  CHECK(smoothing_factor(1.0) == doctest::Approx(0.5));
  const Point c3{0.0, box3d::kHeight / 2, 0.0};
  CHECK(inflow_profile(2.0, c3, Benchmark::Box3d, 3.0)[0] == doctest::Approx(81.0 / 16.0 / 4.0 * 3.0));
}

TEST_CASE("functionals of the rest state") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  const FsiState s = FsiState::zero(dofs);
  const BodyForce f = evaluate_drag_lift(s, mesh, dofs, MaterialParams{});
  CHECK(f.drag == 0.0);
  CHECK(f.lift == 0.0);
  const Point u = evaluate_point(s, mesh, dofs, fsi2::kReferencePoint);
  CHECK(u[0] == 0.0);
  CHECK(u[1] == 0.0);
}

TEST_CASE("constant pressure exerts no net force") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  FsiState s = FsiState::zero(dofs);
  const double p = 3.0;
  for (Index c = 0; c < mesh.n_cells(); ++c)
    if (mesh.subdomain(c) == Subdomain::Fluid) s.x[dofs.pressure_dof(c)] = p;
  const BodyForce f = evaluate_drag_lift(s, mesh, dofs, MaterialParams{});
  CHECK(std::abs(f.drag) < 1e-12 * p);
  CHECK(std::abs(f.lift) < 1e-12 * p);
}

TEST_CASE("point evaluation reproduces nodal values") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> d(-1, 1);
  FsiState s = FsiState::zero(dofs);
  for (double& v : s.x) v = d(gen);
  int checked = 0;
  for (Index n = 0; n < dofs.n_nodes() && checked < 20; ++n) {
    if (!dofs.node_in_solid(n)) continue;
    const Point u = evaluate_point(s, mesh, dofs, dofs.node_coord(n));
    CHECK(u[0] == doctest::Approx(s.x[dofs.u_dof(n, 0)]).epsilon(1e-9));
    CHECK(u[1] == doctest::Approx(s.x[dofs.u_dof(n, 1)]).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked == 20);
  CHECK_THROWS_AS(evaluate_point(s, mesh, dofs, {5.0, 5.0, 0.0}), QueryError);
}
