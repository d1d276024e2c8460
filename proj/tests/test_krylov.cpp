#include <doctest.h>

#include <random>

#include "fsi/inner_solver.hpp"
#include "fsi/krylov.hpp"

using namespace fsi;

TEST_CASE("identity converges in one iteration") {
  const SparseMatrix a = SparseMatrix::identity(5);
  const std::vector<double> b{1, -2, 3, 0.5, 4};
  const auto r = gmres(as_operator(a), {}, b);
  CHECK(r.iterations == 1);
  for (int i = 0; i < 5; ++i) CHECK(r.x[i] == doctest::Approx(b[i]).epsilon(1e-14));
}

TEST_CASE("finite termination on a diagonal system") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d.diagonal() << 1, 2, 4;
  const std::vector<double> b{1, 1, 1};
  const auto r = gmres(as_operator(SparseMatrix::from_dense(d)), {}, b, GmresOptions{1e12, 10, 0});
  CHECK(r.iterations <= 3);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.x[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.x[2] == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("random system against a dense solve") {
  std::mt19937 gen(5);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(50, 50);
  for (auto& v : a.reshaped()) v = nd(gen) / std::sqrt(50.0);
  a.diagonal().array() += 3.0;
  Eigen::VectorXd b(50);
  for (auto& v : b) v = nd(gen);
  const Eigen::VectorXd ref = a.partialPivLu().solve(b);
  const auto r = gmres(as_operator(SparseMatrix::from_dense(a)), {}, std::span<const double>(b.data(), 50),
                       GmresOptions{1e10, 500, 0});
  CHECK(r.converged);
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(r.x.data(), 50);
  CHECK((x - ref).norm() / ref.norm() <= 1e-8);
}

TEST_CASE("restarted GMRES and residual history") {
  std::mt19937 gen(6);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(40, 40);
  for (auto& v : a.reshaped()) v = nd(gen) / std::sqrt(40.0);
  a.diagonal().array() += 2.0;
  std::vector<double> b(40, 1.0);
  const auto r = gmres(as_operator(SparseMatrix::from_dense(a)), {}, b, GmresOptions{1e8, 400, 5});
  CHECK(r.converged);
  CHECK(r.residual_history.size() == static_cast<std::size_t>(r.iterations) + 1);
  CHECK(r.residual_history.back() <= r.residual_history.front() / 1e8 * (1 + 1e-8));
}

TEST_CASE("exhausted iterations carry the best iterate") {
  std::mt19937 gen(7);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(30, 30);
  for (auto& v : a.reshaped()) v = nd(gen);
  std::vector<double> b(30, 1.0);
  try {
    (void)gmres(as_operator(SparseMatrix::from_dense(a)), {}, b, GmresOptions{1e12, 3, 0});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best().iterations == 3);
    CHECK(!e.best().converged);
    CHECK(e.best().x.size() == 30);
  }
}

TEST_CASE("ILU(0) is exact on a tridiagonal matrix") {
  const int n = 20;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 4.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.5});
  }
  const SparseMatrix a = SparseMatrix::from_triplets(n, n, t);
  const Ilu0 ilu(a);
  std::vector<double> b(n), x(n);
  for (int i = 0; i < n; ++i) b[i] = std::sin(i + 1.0);
  ilu.apply(b, x);
  const auto ax = a * x;
  for (int i = 0; i < n; ++i) CHECK(ax[i] == doctest::Approx(b[i]).epsilon(1e-12));
  CHECK_THROWS_AS(Ilu0(SparseMatrix::from_dense(Eigen::MatrixXd::Zero(2, 2) + Eigen::MatrixXd::Ones(2, 2) -
                                                Eigen::MatrixXd::Identity(2, 2))),
                  FactorizationError);
}

TEST_CASE("inner solvers") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(6, 6) * 4.0;
  for (int i = 0; i + 1 < 6; ++i) d(i, i + 1) = d(i + 1, i) = -1.0;
  const SparseMatrix a = SparseMatrix::from_dense(d);
  const std::vector<double> b{1, 2, 3, 4, 5, 6};
  for (InnerKind k : {InnerKind::SparseDirect, InnerKind::IluGmres}) {
    InnerConfig cfg;
    cfg.kind = k;
    cfg.rel_reduction = 1e12;
    const auto x = make_inner_solver(a, cfg, "test")->solve(b);
    const auto ax = a * x;
    for (int i = 0; i < 6; ++i) CHECK(ax[i] == doctest::Approx(b[i]).epsilon(1e-9));
  }
  CHECK(inner_kind_from_string(to_string(InnerKind::Jacobi)) == InnerKind::Jacobi);
  CHECK_THROWS_AS(inner_kind_from_string("amg"), ConfigError);
}
