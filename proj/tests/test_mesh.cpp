#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "fsi/functionals.hpp"

using namespace fsi;

namespace {

// Signed area enclosed by the boundary facets (cell kept on the left).
double boundary_area(const Mesh& mesh, bool obstacle_only) {
  double a = 0.0;
  for (const auto& f : mesh.boundary()) {
    const bool obst = f.tag == BoundaryTag::Obstacle || f.tag == BoundaryTag::SolidBase;
    if (obstacle_only && !obst) continue;
    const auto lv = mesh.face_vertices(f.face);
    Point p0 = mesh.node(mesh.cell(f.cell)[lv[0]]);
    Point p1 = mesh.node(mesh.cell(f.cell)[lv[1]]);
    const Point c = mesh.centroid(f.cell);
    const double side = (p1[0] - p0[0]) * (c[1] - p0[1]) - (p1[1] - p0[1]) * (c[0] - p0[0]);
    if (side < 0) std::swap(p0, p1);
    a += 0.5 * (p0[0] * p1[1] - p1[0] * p0[1]);
  }
  return a;
}

double total_measure(const Mesh& mesh, std::optional<Subdomain> sd = {}) {
  double a = 0.0;
  for (Index c = 0; c < mesh.n_cells(); ++c)
    if (!sd || mesh.subdomain(c) == *sd) a += mesh.cell_measure(c);
  return a;
}

bool in_beam(const Point& x) {
  return x[0] > fsi2::kCylinderX && x[0] < fsi2::kBeamTipX &&
         std::abs(x[1] - fsi2::kCylinderY) < 0.5 * fsi2::kBeamThickness;
}

}  // namespace

TEST_CASE("FSI-2 coarse mesh: subdomains and reference point") {
  const Mesh mesh = build_fsi2_mesh(0);
  CHECK(validate_mesh(mesh).empty());
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    const bool beam = in_beam(mesh.centroid(c));
    CHECK(beam == (mesh.subdomain(c) == Subdomain::Solid));
  }
  bool on_boundary = false;
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    if (mesh.subdomain(c) != Subdomain::Solid) continue;
    const auto xi = locate_in_cell(mesh, c, fsi2::kReferencePoint);
    if (!xi) continue;
    for (int a = 0; a < 2; ++a) on_boundary = on_boundary || std::abs((*xi)[a]) < 1e-10 || std::abs((*xi)[a] - 1) < 1e-10;
  }
  CHECK(on_boundary);
}

TEST_CASE("FSI-2 coarse mesh: cell areas partition the domain") {
  const Mesh mesh = build_fsi2_mesh(0);
  const double cells = total_measure(mesh);
  CHECK(cells == doctest::Approx(boundary_area(mesh, false)).epsilon(1e-12));
  const double hole = -boundary_area(mesh, true);
  CHECK(std::abs(fsi2::kLength * fsi2::kHeight - hole - cells) < 1e-12);
  const double r = fsi2::kCylinderRadius;
  CHECK(hole == doctest::Approx(std::numbers::pi * r * r).epsilon(0.05));
}

TEST_CASE("FSI-2 refinement quadruples the cell count") {
  CHECK(build_fsi2_mesh(1).n_cells() == 4 * build_fsi2_mesh(0).n_cells());
  CHECK(validate_mesh(build_fsi2_mesh(1)).empty());
}

TEST_CASE("3D box mesh: solid volume, symmetry, refinement") {
  const Mesh mesh = build_box3d_mesh(0);
  CHECK(validate_mesh(mesh).empty());
  CHECK(std::abs(total_measure(mesh, Subdomain::Solid) - 0.1 * 0.3 * 0.4) < 1e-12);
  std::set<std::array<long long, 3>> nodes;
  auto key = [](const Point& p, double s) {
    return std::array<long long, 3>{std::llround(p[0] * 1e9), std::llround(p[1] * 1e9), std::llround(s * p[2] * 1e9)};
  };
  for (const auto& p : mesh.nodes()) nodes.insert(key(p, 1.0));
  for (const auto& p : mesh.nodes()) CHECK(nodes.count(key(p, -1.0)) == 1);
  CHECK(build_box3d_mesh(1).n_cells() == 8 * mesh.n_cells());
}

TEST_CASE("uniform refinement of one square") {
  const Mesh fine = refine_uniform(build_single_cell_mesh(2, Subdomain::Fluid));
  CHECK(fine.n_cells() == 4);
  CHECK(fine.n_nodes() == 9);
}

TEST_CASE("refined cells inherit the parent subdomain") {
  const Mesh coarse = build_fsi2_mesh(0);
  const Mesh fine = refine_uniform(coarse);
  for (Index c = 0; c < fine.n_cells(); ++c) {
    const Point x = fine.centroid(c);
    bool found = false;
    for (Index p = 0; p < coarse.n_cells() && !found; ++p)
      if (locate_in_cell(coarse, p, x, 1e-8)) {
        found = true;
        CHECK(coarse.subdomain(p) == fine.subdomain(c));
      }
    CHECK(found);
  }
}

TEST_CASE("interface facets multiply under refinement") {
  const Mesh m2 = build_fsi2_mesh(0);
  CHECK(refine_uniform(m2).interface_facets().size() == 2 * m2.interface_facets().size());
  const Mesh m3 = build_box3d_mesh(0);
  CHECK(refine_uniform(m3).interface_facets().size() == 4 * m3.interface_facets().size());
}
