#include <doctest.h>

#include <numeric>

#include "fsi/dofmap.hpp"

using namespace fsi;

TEST_CASE("Q1 shape functions are nodal at the origin") {
  const LagrangeElement q1(2, 1);
  const auto s = q1.shape_eval({0, 0, 0});
  CHECK(s.values == std::vector<double>{1, 0, 0, 0});
}

TEST_CASE("partition of unity") {
  for (int dim : {2, 3})
    for (int order : {1, 2}) {
      const LagrangeElement fe(dim, order);
      const auto s = fe.shape_eval({0.3, 0.71, 0.45});
      CHECK(std::accumulate(s.values.begin(), s.values.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
      for (int a = 0; a < dim; ++a) {
        double g = 0.0;
        for (int i = 0; i < fe.n_dofs(); ++i) g += s.gradients[i * dim + a];
        CHECK(std::abs(g) < 1e-13);
      }
    }
}

TEST_CASE("Q2 edge midpoint is a node") {
  const LagrangeElement q2(2, 2);
  const auto s = q2.shape_eval({0.5, 0.0, 0.0});
  for (int i = 0; i < q2.n_dofs(); ++i) {
    const Point x = q2.support_point(i);
    const bool mid = x[0] == 0.5 && x[1] == 0.0;
    CHECK(s.values[i] == doctest::Approx(mid ? 1.0 : 0.0).epsilon(1e-14));
  }
}

TEST_CASE("shape evaluation rejects points outside the cell") {
  CHECK_THROWS_AS(LagrangeElement(2, 2).shape_eval({1.5, 0.2, 0}), std::invalid_argument);
}

TEST_CASE("interface nodes belong to the solid block") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{1});
  int seen = 0;
  for (Index n = 0; n < dofs.n_nodes(); ++n) {
    if (!dofs.node_on_interface(n)) continue;
    ++seen;
    for (int c = 0; c < 2; ++c) {
      CHECK(dofs.block_class(dofs.u_dof(n, c)) == BlockClass::Solid);
      CHECK(dofs.block_class(dofs.v_dof(n, c)) == BlockClass::Solid);
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("dof count of one fluid cell") {
  const Mesh mesh = build_single_cell_mesh(2, Subdomain::Fluid);
  CHECK(DofMap(mesh, ElementPair{1}, DofOptions{true}).n_dofs() == 2 * (4 * 2) + 1);
}

TEST_CASE("dof count grows about fourfold per refinement") {
  const double n0 = DofMap(build_fsi2_mesh(0), ElementPair{2}).n_dofs();
  const double n1 = DofMap(build_fsi2_mesh(1), ElementPair{2}).n_dofs();
  CHECK(n1 / n0 > 3.5);
  CHECK(n1 / n0 < 4.5);
}
