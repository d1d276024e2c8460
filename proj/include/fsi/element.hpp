#pragma once

#include <span>
#include <vector>

#include "fsi/common.hpp"
#include "fsi/detail/reference_cell.hpp"

namespace fsi {

/// Tensor-product Gauss-Legendre rule on [0,1]^dim (or on one face of it).
struct QuadratureRule {
  int dim = 2;
  int exactness = 1;  ///< highest polynomial degree per direction integrated exactly
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }

  /// `n` points per direction, exact to degree 2n-1.
  static QuadratureRule gauss(int dim, int n);
  /// Rule with `n` points per direction on local face `face` of [0,1]^dim,
  /// expressed in cell reference coordinates; weights sum to 1.
  static QuadratureRule face(int dim, int n, int face);
  /// Smallest Gauss rule exact to `degree`.
  static QuadratureRule for_degree(int dim, int degree) { return gauss(dim, degree / 2 + 1); }
};

/// Shape values and reference gradients at one point.
struct ShapeValues {
  std::vector<double> values;
  std::vector<double> gradients;  ///< gradients[i * dim + a] = d phi_i / d xi_a
};

/// Continuous Lagrange Q(k) element on [0,1]^dim with nodes on the uniform
/// lattice, numbered lexicographically (x fastest).
class LagrangeElement {
 public:
  LagrangeElement(int dim, int order);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  int n_dofs() const noexcept { return n_dofs_; }
  /// Position of local basis function i on the 3^dim cell lattice.
  detail::LatticeIndex lattice_index(int i) const;
  /// Reference support point of basis function i.
  Point support_point(int i) const;

  /// Throws std::invalid_argument if `xi` lies outside the reference cell.
  ShapeValues shape_eval(const Point& xi) const;
  void eval(const Point& xi, std::span<double> values, std::span<double> gradients) const;

 private:
  int dim_;
  int order_;
  int n_dofs_;
};

/// Discontinuous P(m) element, m in {0, 1}: basis {1, xi_a - 1/2}.
class PressureElement {
 public:
  PressureElement(int dim, int degree);
  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  int n_dofs() const noexcept { return degree_ == 0 ? 1 : dim_ + 1; }
  void eval(const Point& xi, std::span<double> values) const;

 private:
  int dim_;
  int degree_;
};

/// Q(k) displacement/velocity with discontinuous P(k-1) pressure.
struct ElementPair {
  int order = 2;

  void validate() const {
    if (order != 1 && order != 2) throw ConfigError("element order must be 1 or 2");
  }
  LagrangeElement kinematic(int dim) const { return LagrangeElement(dim, order); }
  PressureElement pressure(int dim) const { return PressureElement(dim, order - 1); }
  /// Quadrature exact to degree 2k+1 per direction.
  QuadratureRule cell_quadrature(int dim) const { return QuadratureRule::for_degree(dim, 2 * order + 1); }
  QuadratureRule face_quadrature(int dim, int face) const {
    return QuadratureRule::face(dim, (2 * order + 1) / 2 + 1, face);
  }
};

}  // namespace fsi
