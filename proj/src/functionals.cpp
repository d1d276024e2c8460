#include "fsi/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "fsi/detail/cell_eval.hpp"

namespace fsi {

namespace {

template <int Dim>
void add_facet_force(const FsiState& state, const Mesh& mesh, const DofMap& dofs, const MaterialParams& mp,
                     Index cell, int face, Vec<Dim>& force) {
  const auto& el = dofs.elements();
  const auto rule = el.face_quadrature(Dim, face);
  const detail::ShapeTable tab(Dim, el.kinematic(Dim), el.pressure(Dim), rule.points, rule.weights);
  const auto cd = dofs.cell_dofs(cell);
  std::vector<double> xl(cd.size());
  for (std::size_t i = 0; i < cd.size(); ++i) xl[i] = state.x[cd[i]];
  detail::PointGeometry<Dim> geo;
  for (int q = 0; q < tab.n_points; ++q) {
    geo.compute(mesh, cell, tab, q);
    const auto [n, ds] = geo.face_normal(face);
    const auto f = detail::interpolate<Dim>(tab, q, geo, xl.data(), true);
    const auto k = deformation_state<Dim>(f.grad_u, cell);
    const Tensor<Dim> sigma = fluid_stress<Dim>(f.grad_v, f.p, k, mp);
    force -= tab.weights[q] * ds * (k.J * sigma * k.F_inv.transpose() * n);
  }
}

template <int Dim>
BodyForce drag_lift(const FsiState& state, const Mesh& mesh, const DofMap& dofs, const MaterialParams& mp) {
  Vec<Dim> force = Vec<Dim>::Zero();
  for (const auto& b : mesh.boundary())
    if (b.tag == BoundaryTag::Obstacle && mesh.subdomain(b.cell) == Subdomain::Fluid)
      add_facet_force<Dim>(state, mesh, dofs, mp, b.cell, b.face, force);
  for (const auto& f : mesh.interface_facets())
    add_facet_force<Dim>(state, mesh, dofs, mp, f.fluid_cell, f.fluid_face, force);
  BodyForce out;
  out.drag = force[0];
  out.lift = force[1];
  if constexpr (Dim == 3) out.side = force[2];
  return out;
}

}  // namespace

BodyForce evaluate_drag_lift(const FsiState& state, const Mesh& mesh, const DofMap& dofs,
                             const MaterialParams& params) {
  if (static_cast<Index>(state.x.size()) != dofs.n_dofs())
    throw ConfigError("state vector length does not match the dof map");
  return mesh.dim() == 2 ? drag_lift<2>(state, mesh, dofs, params) : drag_lift<3>(state, mesh, dofs, params);
}

std::optional<Point> locate_in_cell(const Mesh& mesh, Index cell, const Point& x, double tol) {
  const int dim = mesh.dim();
  const auto verts = mesh.cell(cell);
  const int nv = 1 << dim;
  std::vector<Point> cv(nv);
  Point lo = mesh.node(verts[0]);
  Point hi = lo;
  for (int v = 0; v < nv; ++v) {
    cv[v] = mesh.node(verts[v]);
    for (int a = 0; a < dim; ++a) {
      lo[a] = std::min(lo[a], cv[v][a]);
      hi[a] = std::max(hi[a], cv[v][a]);
    }
  }
  double diam = 0.0;
  for (int a = 0; a < dim; ++a) diam = std::max(diam, hi[a] - lo[a]);
  // Curved cells may bulge slightly beyond the vertex box.
  const double pad = 0.05 * diam + tol;
  for (int a = 0; a < dim; ++a)
    if (x[a] < lo[a] - pad || x[a] > hi[a] + pad) return std::nullopt;

  Point xi{0.5, 0.5, dim == 3 ? 0.5 : 0.0};
  for (int it = 0; it < 50; ++it) {
    const auto g = detail::map_point(dim, cv, xi);
    Eigen::Matrix3d jac = Eigen::Matrix3d::Identity();
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    for (int a = 0; a < dim; ++a) {
      r[a] = x[a] - g.x[a];
      for (int b = 0; b < dim; ++b) jac(a, b) = g.jac[a][b];
    }
    const Eigen::Vector3d d = jac.partialPivLu().solve(r);
    double step = 0.0;
    for (int a = 0; a < dim; ++a) {
      xi[a] += d[a];
      step = std::max(step, std::abs(d[a]));
    }
    if (step < 1e-14) break;
    for (int a = 0; a < dim; ++a)
      if (std::abs(xi[a]) > 10.0) return std::nullopt;
  }
  for (int a = 0; a < dim; ++a) {
    if (xi[a] < -1e-8 || xi[a] > 1.0 + 1e-8) return std::nullopt;
    xi[a] = std::clamp(xi[a], 0.0, 1.0);
  }
  return xi;
}

Point evaluate_point(const FsiState& state, const Mesh& mesh, const DofMap& dofs, const Point& x) {
  const int dim = mesh.dim();
  const auto fe = dofs.elements().kinematic(dim);
  for (Subdomain sd : {Subdomain::Solid, Subdomain::Fluid}) {
    for (Index c = 0; c < mesh.n_cells(); ++c) {
      if (mesh.subdomain(c) != sd) continue;
      const auto xi = locate_in_cell(mesh, c, x);
      if (!xi) continue;
      const auto sv = fe.shape_eval(*xi);
      const auto nodes = dofs.cell_nodes(c);
      Point u{0, 0, 0};
      for (std::size_t i = 0; i < nodes.size(); ++i)
        for (int a = 0; a < dim; ++a) u[a] += sv.values[i] * state.x[dofs.u_dof(nodes[i], a)];
      return u;
    }
  }
  throw QueryError("point (" + std::to_string(x[0]) + ", " + std::to_string(x[1]) + ", " + std::to_string(x[2]) +
                   ") is not inside any cell");
}

}  // namespace fsi
