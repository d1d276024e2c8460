#include <doctest.h>

#include <random>

#include "fsi/assembly.hpp"
#include "fsi/linear_solver.hpp"

using namespace fsi;

namespace {

FsiState random_state(const DofMap& dofs, double amp, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  FsiState s = FsiState::zero(dofs);
  for (auto& v : s.x) v = u(gen);
  return s;
}

}  // namespace

TEST_CASE("jacobian matches finite differences on a fluid cell") {
  for (int dim : {2, 3}) {
    const Mesh mesh = build_single_cell_mesh(dim, Subdomain::Fluid, BoundaryTag::Outflow);
    const DofMap dofs(mesh, ElementPair{2}, DofOptions{true});
    const FsiAssembler a(mesh, dofs, MaterialParams{});
    const auto s = random_state(dofs, 0.05, 1);
    const auto s0 = random_state(dofs, 0.05, 2);
    const ThetaStep step{0.01, 0.5};
    const auto j = a.jacobian(s, s0, step, false);
    const auto r = finite_difference_check(a, j, s, s0, step);
    CAPTURE(dim);
    CHECK(r.max_rel_error < 1e-5);
  }
}

TEST_CASE("jacobian matches finite differences on a solid cell") {
  for (int dim : {2, 3}) {
    const Mesh mesh = build_single_cell_mesh(dim, Subdomain::Solid, BoundaryTag::SolidBase);
    const DofMap dofs(mesh, ElementPair{2}, DofOptions{true});
    const FsiAssembler a(mesh, dofs, MaterialParams{});
    const auto s = random_state(dofs, 0.05, 3);
    const auto s0 = random_state(dofs, 0.05, 4);
    const ThetaStep step{0.01, 0.5};
    const auto j = a.jacobian(s, s0, step, false);
    CAPTURE(dim);
    CHECK(finite_difference_check(a, j, s, s0, step).max_rel_error < 1e-5);
  }
}

TEST_CASE("directional derivative on the coarse FSI-2 mesh") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  const FsiAssembler a(mesh, dofs, MaterialParams{});
  const ThetaStep step{0.01, 0.505};
  const auto s = random_state(dofs, 1e-3, 5);
  const auto s0 = random_state(dofs, 1e-3, 6);
  const auto j = a.jacobian(s, s0, step, false);
  const auto dir = random_state(dofs, 1.0, 7);
  CHECK(directional_fd_error(a, j, s, s0, step, dir.x) < 1e-5);
}

TEST_CASE("rest state is a solution") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  const FsiAssembler a(mesh, dofs, MaterialParams{});
  FsiState s = FsiState::zero(dofs);
  inject_dirichlet(s.x, dofs, 0.0, InflowSpec{});
  CHECK(norm_inf(s.x) == 0.0);
  CHECK(norm_inf(a.residual(s, s, ThetaStep{0.005, 0.505}, false)) == 0.0);
}

TEST_CASE("constant pressure on one fluid cell") {
  const Mesh mesh = build_single_cell_mesh(2, Subdomain::Fluid, BoundaryTag::Bottom);
  const DofMap dofs(mesh, ElementPair{2}, DofOptions{true});
  const FsiAssembler a(mesh, dofs, MaterialParams{});
  FsiState s = FsiState::zero(dofs);
  s.x[dofs.pressure_dof(0)] = 7.0;
  const auto r = a.residual(s, s, ThetaStep{0.01, 0.5}, false);
  // Only the interior (bubble) node has a test function vanishing on the
  // boundary, so its pressure-gradient rows integrate to zero.
  const auto nodes = dofs.cell_nodes(0);
  for (Index n : nodes) {
    const Point& x = dofs.node_coord(n);
    if (x[0] == 0.5 && x[1] == 0.5)
      for (int c = 0; c < 2; ++c) CHECK(std::abs(r[dofs.v_dof(n, c)]) < 1e-14);
  }
  for (Index i = dofs.first_pressure_dof(); i < dofs.n_dofs(); ++i) CHECK(r[i] == 0.0);
}

TEST_CASE("Dirichlet rows and inflow values") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  const FsiAssembler a(mesh, dofs, MaterialParams{});
  const InflowSpec inflow{Benchmark::Fsi2, 1.0};
  FsiState prev = FsiState::zero(dofs);
  FsiState s = prev;
  s.t = 1.0;
  inject_dirichlet(s.x, dofs, s.t, inflow);
  int n_inflow = 0;
  for (const auto& d : dofs.dirichlet())
    if (d.inflow) {
      ++n_inflow;
      CHECK(s.x[d.dof] == inflow_profile(s.t, d.x, Benchmark::Fsi2, 1.0)[d.component]);
    }
  CHECK(n_inflow > 0);
  const ThetaStep step{0.01, 0.51};
  auto r = a.residual(s, prev, step);
  for (const auto& d : dofs.dirichlet()) CHECK(r[d.dof] == 0.0);
  CHECK(norm_inf(r) > 0.0);

  SparseMatrix j = a.jacobian(s, prev, step);
  for (double& v : r) v = -v;
  LinearSolverConfig cfg;
  cfg.method = LinearMethod::Direct;
  LinearSolver ls(dofs, cfg);
  ls.setup(j, step.dt * step.theta);
  const auto dx = ls.solve(r);
  for (const auto& d : dofs.dirichlet()) CHECK(dx[d.dof] == 0.0);
}

TEST_CASE("Stokes limit: velocity block is symmetric") {
  const Mesh mesh = refine_uniform(build_single_cell_mesh(2, Subdomain::Fluid, BoundaryTag::Bottom));
  const DofMap dofs(mesh, ElementPair{2}, DofOptions{true});
  const FsiAssembler a(mesh, dofs, MaterialParams{});
  const FsiState s = FsiState::zero(dofs);
  const Eigen::MatrixXd j = a.jacobian(s, s, ThetaStep{0.01, 0.5}, false).to_dense();
  double asym = 0.0;
  for (Index i = 0; i < dofs.n_dofs(); ++i)
    for (Index k = 0; k < dofs.n_dofs(); ++k)
      if (dofs.field(i) == Field::V && dofs.field(k) == Field::V) asym = std::max(asym, std::abs(j(i, k) - j(k, i)));
  CHECK(asym < 1e-12 * j.cwiseAbs().maxCoeff());
}

TEST_CASE("mesh-motion block is the Laplacian at rest") {
  const Mesh mesh = build_single_cell_mesh(2, Subdomain::Fluid, BoundaryTag::Bottom);
  const DofMap dofs(mesh, ElementPair{1}, DofOptions{true});
  const FsiAssembler a(mesh, dofs, MaterialParams{});
  const FsiState s = FsiState::zero(dofs);
  const SparseMatrix j = a.jacobian(s, s, ThetaStep{0.01, 0.5}, false);
  const auto nodes = dofs.cell_nodes(0);
  for (Index m : nodes)
    for (Index n : nodes) {
      const Point& x = dofs.node_coord(m);
      const Point& y = dofs.node_coord(n);
      const int differ = (x[0] != y[0]) + (x[1] != y[1]);
      const double k = differ == 0 ? 2.0 / 3 : differ == 1 ? -1.0 / 6 : -1.0 / 3;
      for (int c = 0; c < 2; ++c) {
        CHECK(j.coeff(dofs.u_dof(m, c), dofs.u_dof(n, c)) == doctest::Approx(k).epsilon(1e-13));
        CHECK(j.coeff(dofs.u_dof(m, c), dofs.u_dof(n, 1 - c)) == 0.0);
      }
    }
}

TEST_CASE("threaded assembly matches serial assembly") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  FsiAssembler a(mesh, dofs, MaterialParams{});
  const auto s = random_state(dofs, 1e-3, 8);
  const auto s0 = random_state(dofs, 1e-3, 9);
  const ThetaStep step{0.005, 0.505};
  const auto r1 = a.residual(s, s0, step);
  const auto j1 = a.jacobian(s, s0, step);
  a.set_threads(3);
  const auto r3 = a.residual(s, s0, step);
  CHECK(a.residual(s, s0, step) == r3);
  std::vector<double> dr(r1.size());
  for (std::size_t k = 0; k < r1.size(); ++k) dr[k] = r3[k] - r1[k];
  CHECK(norm_inf(dr) <= 1e-12 * norm_inf(r1));
  a.set_deterministic_merge(false);
  const auto j3 = a.jacobian(s, s0, step);
  double diff = 0.0;
  for (std::size_t k = 0; k < j1.values().size(); ++k)
    diff = std::max(diff, std::abs(j1.values()[k] - j3.values()[k]));
  CHECK(diff <= 1e-12 * (1.0 + norm_inf(j1.values())));
}
