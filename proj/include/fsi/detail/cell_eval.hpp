#pragma once

#include <vector>

#include "fsi/dofmap.hpp"
#include "fsi/kinematics.hpp"

namespace fsi::detail {

/// Reference shape tables of the kinematic and pressure elements at a fixed
/// set of reference points.
struct ShapeTable {
  int n_points = 0;
  int n_kin = 0;
  int n_p = 0;
  std::vector<Point> points;
  std::vector<double> weights;
  std::vector<double> n;      ///< [q * n_kin + i]
  std::vector<double> dn;     ///< [(q * n_kin + i) * dim + a], reference gradients
  std::vector<double> p;      ///< [q * n_p + j]
  std::vector<double> q1;     ///< geometry shape values [q * 2^dim + v]
  std::vector<double> dq1;    ///< geometry reference gradients [(q * 2^dim + v) * dim + a]

  ShapeTable() = default;
  ShapeTable(int dim, const LagrangeElement& fe, const PressureElement& pe, const std::vector<Point>& pts,
             const std::vector<double>& w)
      : n_points(static_cast<int>(pts.size())), n_kin(fe.n_dofs()), n_p(pe.n_dofs()), points(pts), weights(w) {
    const int nv = 1 << dim;
    n.resize(n_points * n_kin);
    dn.resize(n_points * n_kin * dim);
    p.resize(n_points * n_p);
    q1.resize(n_points * nv);
    dq1.resize(n_points * nv * dim);
    std::array<double, 8> s{};
    std::array<std::array<double, 3>, 8> g{};
    for (int q = 0; q < n_points; ++q) {
      fe.eval(pts[q], std::span(n.data() + q * n_kin, n_kin), std::span(dn.data() + q * n_kin * dim, n_kin * dim));
      pe.eval(pts[q], std::span(p.data() + q * n_p, n_p));
      q1_shape(dim, pts[q], std::span(s.data(), nv), std::span(g.data(), nv));
      for (int v = 0; v < nv; ++v) {
        q1[q * nv + v] = s[v];
        for (int a = 0; a < dim; ++a) dq1[(q * nv + v) * dim + a] = g[v][a];
      }
    }
  }
};

/// Physical-reference geometry at one point of a cell: the cell's
/// multilinear map, its Jacobian and the gradients of the kinematic basis.
template <int Dim>
struct PointGeometry {
  Vec<Dim> x;
  Tensor<Dim> jac;       ///< d x / d xi
  Tensor<Dim> jac_inv_t;  ///< (d x / d xi)^{-T}
  double det = 0.0;
  std::vector<Vec<Dim>> grad;  ///< physical gradients of the kinematic basis

  void compute(const Mesh& mesh, Index cell, const ShapeTable& t, int q) {
    constexpr int nv = 1 << Dim;
    const auto verts = mesh.cell(cell);
    x.setZero();
    jac.setZero();
    for (int v = 0; v < nv; ++v) {
      const Point& X = mesh.node(verts[v]);
      const double s = t.q1[q * nv + v];
      for (int r = 0; r < Dim; ++r) {
        x[r] += s * X[r];
        for (int c = 0; c < Dim; ++c) jac(r, c) += X[r] * t.dq1[(q * nv + v) * Dim + c];
      }
    }
    det = jac.determinant();
    jac_inv_t = jac.inverse().transpose();
    grad.resize(t.n_kin);
    for (int i = 0; i < t.n_kin; ++i) {
      Vec<Dim> g;
      for (int a = 0; a < Dim; ++a) g[a] = t.dn[(q * t.n_kin + i) * Dim + a];
      grad[i] = jac_inv_t * g;
    }
  }

  /// Outward unit normal and surface measure factor for local face `face`.
  std::pair<Vec<Dim>, double> face_normal(int face) const {
    Vec<Dim> nref = Vec<Dim>::Zero();
    nref[face / 2] = face % 2 ? 1.0 : -1.0;
    Vec<Dim> nn = jac_inv_t * nref;
    const double len = nn.norm();
    return {nn / len, det * len};
  }
};

/// Interpolated kinematic fields at a point.
template <int Dim>
struct FieldValues {
  Vec<Dim> u, v;
  Tensor<Dim> grad_u, grad_v;
  double p = 0.0;
};

/// `local` holds the cell's dof values in DofMap::cell_dofs order.
template <int Dim>
FieldValues<Dim> interpolate(const ShapeTable& t, int q, const PointGeometry<Dim>& g, const double* local,
                             bool has_pressure) {
  FieldValues<Dim> f;
  f.u.setZero();
  f.v.setZero();
  f.grad_u.setZero();
  f.grad_v.setZero();
  const int nk = t.n_kin;
  for (int i = 0; i < nk; ++i) {
    const double s = t.n[q * nk + i];
    for (int c = 0; c < Dim; ++c) {
      const double uc = local[i * Dim + c];
      const double vc = local[nk * Dim + i * Dim + c];
      f.u[c] += s * uc;
      f.v[c] += s * vc;
      f.grad_u.row(c) += uc * g.grad[i].transpose();
      f.grad_v.row(c) += vc * g.grad[i].transpose();
    }
  }
  if (has_pressure)
    for (int j = 0; j < t.n_p; ++j) f.p += t.p[q * t.n_p + j] * local[2 * nk * Dim + j];
  return f;
}

}  // namespace fsi::detail
