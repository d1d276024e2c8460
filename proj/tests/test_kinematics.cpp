#include <doctest.h>

#include <random>

#include "fsi/kinematics.hpp"

using namespace fsi;

namespace {

Tensor<2> random_grad(std::mt19937& gen, double amp) {
  std::uniform_real_distribution<double> d(-amp, amp);
  Tensor<2> g;
  for (int i = 0; i < 4; ++i) g(i / 2, i % 2) = d(gen);
  return g;
}

}  // namespace

TEST_CASE("identity deformation") {
  const auto k = deformation_state<2>(Tensor<2>::Zero());
  CHECK(k.F == Tensor<2>::Identity());
  CHECK(k.J == 1.0);
  CHECK(k.E == Tensor<2>::Zero());
}

TEST_CASE("uniform stretch") {
  const double a = 0.1;
  const auto k = deformation_state<2>(a * Tensor<2>::Identity());
  CHECK(k.J == doctest::Approx((1 + a) * (1 + a)).epsilon(1e-15));
  CHECK((k.E - (a + a * a / 2) * Tensor<2>::Identity()).norm() < 1e-15);
}

TEST_CASE("inverse of F") {
  std::mt19937 gen(1);
  for (int k = 0; k < 20; ++k) {
    const auto s = deformation_state<2>(random_grad(gen, 0.3));
    CHECK((s.F * s.F_inv - Tensor<2>::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("folded map is rejected") {
  Tensor<2> g = Tensor<2>::Zero();
  g(0, 0) = -2.0;
  CHECK_THROWS_AS(deformation_state<2>(g), MeshDegenerationError);
}

TEST_CASE("St. Venant-Kirchhoff stress") {
  const MaterialParams p;
  CHECK(stvk_stress<2>(Tensor<2>::Zero(), p) == Tensor<2>::Zero());
  const double e = 1e-3;
  Tensor<2> E = Tensor<2>::Zero();
  E(0, 0) = e;
  const Tensor<2> s = stvk_stress<2>(E, p);
  CHECK(s(0, 0) == doctest::Approx(3e6 * e));
  CHECK(s(1, 1) == doctest::Approx(2e6 * e));
  CHECK(s(0, 1) == 0.0);
  std::mt19937 gen(2);
  const Tensor<2> R = random_grad(gen, 1.0);
  CHECK((stvk_stress<2>(2.5 * R, p) - 2.5 * stvk_stress<2>(R, p)).norm() < 1e-14 * stvk_stress<2>(R, p).norm());
}

TEST_CASE("fluid stress") {
  const MaterialParams p;
  const auto id = deformation_state<2>(Tensor<2>::Zero());
  CHECK(fluid_stress<2>(Tensor<2>::Zero(), 3.0, id, p) == -3.0 * Tensor<2>::Identity());
  std::mt19937 gen(3);
  const Tensor<2> gv = random_grad(gen, 1.0);
  const Tensor<2> newtonian = -2.0 * Tensor<2>::Identity() + p.rho_f * p.nu_f * (gv + gv.transpose());
  CHECK((fluid_stress<2>(gv, 2.0, id, p) - newtonian).norm() < 1e-14);

  // general F: entrywise re-evaluation of -p I + rho nu (gv F^-1 + F^-T gv^T)
  const auto k = deformation_state<2>(random_grad(gen, 0.2));
  const Tensor<2> s = fluid_stress<2>(gv, 1.5, k, p);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double a = 0.0, b = 0.0;
      for (int m = 0; m < 2; ++m) {
        a += gv(i, m) * k.F_inv(m, j);
        b += gv(j, m) * k.F_inv(m, i);
      }
      CHECK(s(i, j) == doctest::Approx(-1.5 * (i == j) + p.rho_f * p.nu_f * (a + b)).epsilon(1e-13));
    }
}

TEST_CASE("directional derivatives at the identity") {
  std::mt19937 gen(4);
  const Tensor<2> G = random_grad(gen, 1.0);
  const auto d = shape_derivatives(deformation_state<2>(Tensor<2>::Zero()), G);
  CHECK(d.dF == G);
  CHECK(d.dJ == doctest::Approx(G.trace()).epsilon(1e-14));
  CHECK((d.dF_inv + G).norm() < 1e-15);
  CHECK(d.dF_invT == d.dF_inv.transpose());
}

TEST_CASE("derivative of J against central differences") {
  std::mt19937 gen(5);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const Tensor<2> gu = random_grad(gen, 0.3);
    const Tensor<2> du = random_grad(gen, 1.0);
    const auto d = shape_derivatives(deformation_state<2>(gu), du);
    const double fd = (deformation_state<2>(gu + h * du).J - deformation_state<2>(gu - h * du).J) / (2 * h);
    CHECK(std::abs(fd - d.dJ) <= 1e-5 * std::abs(d.dJ) + 1e-12);
    const Tensor<2> fdE = (deformation_state<2>(gu + h * du).E - deformation_state<2>(gu - h * du).E) / (2 * h);
    CHECK((fdE - d.dE).norm() <= 1e-5 * d.dE.norm());
  }
}
