#pragma once

#include <Eigen/Dense>

#include "fsi/common.hpp"

namespace fsi {

template <int Dim>
using Tensor = Eigen::Matrix<double, Dim, Dim>;
template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;

/// Fluid and solid material parameters.
struct MaterialParams {
  double rho_f = 1.0e3;   ///< fluid density
  double nu_f = 1.0e-3;   ///< kinematic viscosity
  double rho_s = 1.0e4;   ///< solid density
  double lambda = 2.0e6;  ///< Lame lambda
  double mu = 0.5e6;      ///< Lame mu

  void validate() const {
    if (!(rho_f > 0 && nu_f > 0 && rho_s > 0 && lambda > 0 && mu > 0))
      throw ConfigError("material parameters must be strictly positive");
  }
};

/// Deformation quantities of the ALE map at one point.
template <int Dim>
struct KinematicState {
  Tensor<Dim> grad_u;
  Tensor<Dim> F;
  double J = 1.0;
  Tensor<Dim> F_inv;
  Tensor<Dim> E;  ///< Green-Lagrange strain
};

/// F = I + grad_u, J = det F, F^{-1}, E = (grad_u + grad_u^T + grad_u^T grad_u)/2.
/// Throws MeshDegenerationError when J <= 0.
template <int Dim>
KinematicState<Dim> deformation_state(const Tensor<Dim>& grad_u, Index cell = -1) {
  KinematicState<Dim> k;
  k.grad_u = grad_u;
  k.F = Tensor<Dim>::Identity() + grad_u;
  k.J = k.F.determinant();
  if (!(k.J > 0.0))
    throw MeshDegenerationError("ALE map lost admissibility (det F <= 0) in cell " + std::to_string(cell), cell, k.J);
  k.F_inv = k.F.inverse();
  k.E = 0.5 * (grad_u + grad_u.transpose() + grad_u.transpose() * grad_u);
  return k;
}

/// Saint Venant-Kirchhoff second Piola-Kirchhoff stress 2 mu E + lambda tr(E) I.
template <int Dim>
Tensor<Dim> stvk_stress(const Tensor<Dim>& E, const MaterialParams& p) {
  return 2.0 * p.mu * E + p.lambda * E.trace() * Tensor<Dim>::Identity();
}

/// Viscous part of the ALE fluid stress, rho nu (grad_v F^{-1} + F^{-T} grad_v^T).
template <int Dim>
Tensor<Dim> fluid_viscous_stress(const Tensor<Dim>& grad_v, const KinematicState<Dim>& k, const MaterialParams& p) {
  const Tensor<Dim> gf = grad_v * k.F_inv;
  return p.rho_f * p.nu_f * (gf + gf.transpose());
}

/// ALE Cauchy stress -p I + rho nu (grad_v F^{-1} + F^{-T} grad_v^T).
template <int Dim>
Tensor<Dim> fluid_stress(const Tensor<Dim>& grad_v, double pressure, const KinematicState<Dim>& k,
                         const MaterialParams& p) {
  return -pressure * Tensor<Dim>::Identity() + fluid_viscous_stress(grad_v, k, p);
}

/// Directional derivatives of the kinematic quantities along grad_du.
template <int Dim>
struct ShapeDerivatives {
  Tensor<Dim> dF;
  double dJ = 0.0;
  Tensor<Dim> dF_inv;
  Tensor<Dim> dF_invT;
  Tensor<Dim> dE;
};

template <int Dim>
ShapeDerivatives<Dim> shape_derivatives(const KinematicState<Dim>& k, const Tensor<Dim>& grad_du) {
  ShapeDerivatives<Dim> d;
  d.dF = grad_du;
  d.dJ = k.J * (k.F_inv * grad_du).trace();
  d.dF_inv = -k.F_inv * grad_du * k.F_inv;
  d.dF_invT = d.dF_inv.transpose();
  d.dE = 0.5 * (grad_du.transpose() * k.F + k.F.transpose() * grad_du);
  return d;
}

}  // namespace fsi
