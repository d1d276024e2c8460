#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <vector>

#include "fsi/common.hpp"

namespace fsi::detail {

/// Index of a point of the 3^d lattice {0,1,2}^d of a reference cell
/// (0 = coordinate 0, 1 = midpoint, 2 = coordinate 1).
using LatticeIndex = std::array<int, 3>;

inline int lattice_size(int dim) { return dim == 2 ? 9 : 27; }

inline LatticeIndex lattice_from_linear(int dim, int k) {
  LatticeIndex idx{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    idx[a] = k % 3;
    k /= 3;
  }
  return idx;
}

/// Sorted global vertex ids spanning the sub-entity (vertex, edge, face or
/// cell) whose center is the lattice point `idx`.
inline std::vector<Index> lattice_key(std::span<const Index> cell_vertices, int dim, const LatticeIndex& idx) {
  std::vector<int> locals{0};
  for (int a = 0; a < dim; ++a) {
    std::vector<int> next;
    for (int l : locals) {
      if (idx[a] == 0 || idx[a] == 1) next.push_back(l);
      if (idx[a] == 2 || idx[a] == 1) next.push_back(l | (1 << a));
    }
    locals = std::move(next);
  }
  std::vector<Index> key;
  key.reserve(locals.size());
  for (int l : locals) key.push_back(cell_vertices[l]);
  std::sort(key.begin(), key.end());
  return key;
}

/// Multilinear (Q1) map value and reference gradient at `xi`.
/// `shape[i]` and `grad[i][a]` for the 2^d vertices in lexicographic order.
inline void q1_shape(int dim, const Point& xi, std::span<double> shape, std::span<std::array<double, 3>> grad) {
  const int nv = 1 << dim;
  for (int i = 0; i < nv; ++i) {
    double val = 1.0;
    std::array<double, 3> g{1.0, 1.0, 1.0};
    for (int a = 0; a < dim; ++a) {
      const bool hi = (i >> a) & 1;
      const double f = hi ? xi[a] : 1.0 - xi[a];
      const double df = hi ? 1.0 : -1.0;
      val *= f;
      for (int b = 0; b < dim; ++b) g[b] *= (a == b) ? df : f;
    }
    shape[i] = val;
    grad[i] = {g[0], g[1], dim > 2 ? g[2] : 0.0};
  }
}

/// Geometry Jacobian d x / d xi (row = physical component, column = reference
/// direction) and its determinant, for the multilinear map of a cell.
struct GeometryPoint {
  Point x{0, 0, 0};
  std::array<std::array<double, 3>, 3> jac{};
  double det = 0.0;
};

inline GeometryPoint map_point(int dim, std::span<const Point> vertices, const Point& xi) {
  std::array<double, 8> shape{};
  std::array<std::array<double, 3>, 8> grad{};
  q1_shape(dim, xi, std::span(shape.data(), 1u << dim), std::span(grad.data(), 1u << dim));
  GeometryPoint gp;
  for (int i = 0; i < (1 << dim); ++i) {
    for (int r = 0; r < dim; ++r) {
      gp.x[r] += shape[i] * vertices[i][r];
      for (int c = 0; c < dim; ++c) gp.jac[r][c] += vertices[i][r] * grad[i][c];
    }
  }
  const auto& j = gp.jac;
  if (dim == 2) {
    gp.det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  } else {
    gp.det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
             j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
  }
  return gp;
}

}  // namespace fsi::detail
