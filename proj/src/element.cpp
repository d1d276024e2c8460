#include "fsi/element.hpp"

#include <cmath>
#include <stdexcept>

namespace fsi {

namespace {

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

void gauss_01(int n, std::vector<double>& x, std::vector<double>& w) {
  gauss_legendre(n, x, w);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (x[i] + 1.0);
    w[i] *= 0.5;
  }
}

// 1D Lagrange basis on uniform points of [0,1].
void lagrange_1d(int order, double t, double* val, double* der) {
  if (order == 1) {
    val[0] = 1.0 - t;
    val[1] = t;
    der[0] = -1.0;
    der[1] = 1.0;
  } else {
    val[0] = 2.0 * (t - 0.5) * (t - 1.0);
    val[1] = -4.0 * t * (t - 1.0);
    val[2] = 2.0 * t * (t - 0.5);
    der[0] = 4.0 * t - 3.0;
    der[1] = -8.0 * t + 4.0;
    der[2] = 4.0 * t - 1.0;
  }
}

}  // namespace

QuadratureRule QuadratureRule::gauss(int dim, int n) {
  std::vector<double> x, w;
  gauss_01(n, x, w);
  QuadratureRule q;
  q.dim = dim;
  q.exactness = 2 * n - 1;
  const int total = dim == 2 ? n * n : n * n * n;
  for (int k = 0; k < total; ++k) {
    const int i = k % n, j = (k / n) % n, l = k / (n * n);
    q.points.push_back({x[i], x[j], dim == 3 ? x[l] : 0.0});
    q.weights.push_back(w[i] * w[j] * (dim == 3 ? w[l] : 1.0));
  }
  return q;
}

QuadratureRule QuadratureRule::face(int dim, int n, int face) {
  const QuadratureRule sub = dim == 3 ? gauss(2, n) : QuadratureRule{};
  std::vector<double> x, w;
  gauss_01(n, x, w);
  const int axis = face / 2;
  const double value = face % 2;
  QuadratureRule q;
  q.dim = dim;
  q.exactness = 2 * n - 1;
  if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      Point p{0, 0, 0};
      p[axis] = value;
      p[1 - axis] = x[i];
      q.points.push_back(p);
      q.weights.push_back(w[i]);
    }
  } else {
    const int a1 = axis == 0 ? 1 : 0;
    const int a2 = axis == 2 ? 1 : 2;
    for (std::size_t k = 0; k < sub.size(); ++k) {
      Point p{0, 0, 0};
      p[axis] = value;
      p[a1] = sub.points[k][0];
      p[a2] = sub.points[k][1];
      q.points.push_back(p);
      q.weights.push_back(sub.weights[k]);
    }
  }
  return q;
}

LagrangeElement::LagrangeElement(int dim, int order) : dim_(dim), order_(order) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("LagrangeElement: dim must be 2 or 3");
  if (order != 1 && order != 2) throw std::invalid_argument("LagrangeElement: order must be 1 or 2");
  n_dofs_ = 1;
  for (int a = 0; a < dim; ++a) n_dofs_ *= order + 1;
}

detail::LatticeIndex LagrangeElement::lattice_index(int i) const {
  detail::LatticeIndex idx{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    idx[a] = (i % (order_ + 1)) * (2 / order_);
    i /= order_ + 1;
  }
  return idx;
}

Point LagrangeElement::support_point(int i) const {
  const auto idx = lattice_index(i);
  return {idx[0] * 0.5, idx[1] * 0.5, dim_ == 3 ? idx[2] * 0.5 : 0.0};
}

ShapeValues LagrangeElement::shape_eval(const Point& xi) const {
  ShapeValues sv;
  sv.values.resize(n_dofs_);
  sv.gradients.resize(n_dofs_ * dim_);
  eval(xi, sv.values, sv.gradients);
  return sv;
}

void LagrangeElement::eval(const Point& xi, std::span<double> values, std::span<double> gradients) const {
  constexpr double tol = 1e-12;
  for (int a = 0; a < dim_; ++a)
    if (!(xi[a] >= -tol && xi[a] <= 1.0 + tol))
      throw std::invalid_argument("shape_eval: point outside the reference cell");
  const int m = order_ + 1;
  double val[3][3], der[3][3];
  for (int a = 0; a < dim_; ++a) lagrange_1d(order_, xi[a], val[a], der[a]);
  for (int i = 0; i < n_dofs_; ++i) {
    int loc[3] = {i % m, (i / m) % m, dim_ == 3 ? i / (m * m) : 0};
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= val[a][loc[a]];
    values[i] = v;
    for (int b = 0; b < dim_; ++b) {
      double g = 1.0;
      for (int a = 0; a < dim_; ++a) g *= (a == b) ? der[a][loc[a]] : val[a][loc[a]];
      gradients[i * dim_ + b] = g;
    }
  }
}

PressureElement::PressureElement(int dim, int degree) : dim_(dim), degree_(degree) {
  if (degree != 0 && degree != 1) throw std::invalid_argument("PressureElement: degree must be 0 or 1");
}

void PressureElement::eval(const Point& xi, std::span<double> values) const {
  values[0] = 1.0;
  if (degree_ == 1)
    for (int a = 0; a < dim_; ++a) values[1 + a] = xi[a] - 0.5;
}

}  // namespace fsi
