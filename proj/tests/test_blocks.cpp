#include <doctest.h>

#include <random>

#include "fsi/assembly.hpp"
#include "fsi/dense_ldu.hpp"
#include "fsi/linear_solver.hpp"

using namespace fsi;

namespace {

InnerConfig exact() {
  InnerConfig c;
  c.kind = InnerKind::SparseDirect;
  return c;
}

std::vector<BlockClass> classes_of(const DenseBlocks& b) {
  std::vector<BlockClass> cls;
  for (int k = 0; k < 3; ++k) cls.insert(cls.end(), b.size(k), static_cast<BlockClass>(k));
  return cls;
}

BlockLduPreconditioner sweep_of(const DenseBlocks& b) {
  BlockSystem sys = extract_blocks(SparseMatrix::from_dense(b.assemble()), BlockLayout::from_classes(classes_of(b)));
  auto m = make_inner_solver(sys.mesh(), exact(), "M");
  auto s = make_inner_solver(sys.solid(), exact(), "S");
  auto f = make_inner_solver(sys.fluid(), exact(), "F");
  return BlockLduPreconditioner(std::move(sys), std::move(m), std::move(s), std::move(f));
}

Eigen::VectorXd random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (auto& x : v) x = nd(gen);
  return v;
}

}  // namespace

TEST_CASE("block split of the identity") {
  const std::vector<BlockClass> cls{BlockClass::Fluid, BlockClass::Mesh, BlockClass::Solid, BlockClass::Mesh,
                                    BlockClass::Fluid};
  const BlockSystem sys = extract_blocks(SparseMatrix::identity(5), BlockLayout::from_classes(cls));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const auto& b = sys.blocks[r][c];
      if (r == c) {
        CHECK(b.to_dense().isIdentity());
      } else {
        CHECK(b.nnz() == 0);
      }
    }
}

TEST_CASE("block split round trip") {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> d(-1, 1);
  std::uniform_int_distribution<int> cls(0, 2);
  std::vector<Triplet> t;
  for (int k = 0; k < 400; ++k) t.push_back({static_cast<Index>(gen() % 40), static_cast<Index>(gen() % 40), d(gen)});
  const SparseMatrix a = SparseMatrix::from_triplets(40, 40, t);
  std::vector<BlockClass> c(40);
  for (auto& x : c) x = static_cast<BlockClass>(cls(gen));
  const SparseMatrix b = merge_blocks(extract_blocks(a, BlockLayout::from_classes(c)));
  CHECK(b.row_ptr() == a.row_ptr());
  CHECK(b.col_idx() == a.col_idx());
  CHECK(b.values() == a.values());
  const auto layout = BlockLayout::from_classes(c);
  std::vector<double> x(40);
  for (auto& v : x) v = d(gen);
  CHECK(layout.join(layout.split(x)) == x);
}

TEST_CASE("FSI-2 solid-to-mesh coupling sits on interface velocity rows") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  const FsiAssembler a(mesh, dofs, MaterialParams{});
  FsiState s = FsiState::zero(dofs);
  s.t = 2.0;
  inject_dirichlet(s.x, dofs, s.t, InflowSpec{});
  const BlockSystem sys = extract_blocks(a.jacobian(s, FsiState::zero(dofs), ThetaStep{0.005, 0.505}), dofs);
  // Interface velocity rows also carry the fluid momentum, which depends on
  // the mesh displacement; no other solid row couples to the mesh block.
  const SparseMatrix& csm = sys.block(BlockClass::Solid, BlockClass::Mesh);
  const auto& rows = sys.layout.dofs[static_cast<int>(BlockClass::Solid)];
  for (Index i = 0; i < csm.rows(); ++i) {
    if (csm.row_ptr()[i] == csm.row_ptr()[i + 1]) continue;
    const Index g = rows[i];
    CHECK(dofs.field(g) == Field::V);
    CHECK(dofs.node_on_interface(dofs.dof_node(g)));
  }
  CHECK(sys.block(BlockClass::Mesh, BlockClass::Solid).nnz() > 0);
  CHECK(sys.block(BlockClass::Fluid, BlockClass::Solid).nnz() > 0);
}

TEST_CASE("exact LDU inverts random block systems") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const DenseBlocks b = random_dense_blocks({7, 9, 11}, seed);
    const Eigen::MatrixXd a = b.assemble();
    Eigen::MatrixXd pa(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) pa.col(j) = exact_ldu_reference(b, a.col(j));
    CHECK((pa - Eigen::MatrixXd::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("block-diagonal systems reduce to blockwise inverses") {
  DenseBlocks b = random_dense_blocks({4, 5, 6}, 9);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (r != c) b.a[r][c].setZero();
  const Eigen::VectorXd rhs = random_vector(15, 2);
  const Eigen::VectorXd x = exact_ldu_reference(b, rhs);
  CHECK((b.a[0][0] * x.head(4) - rhs.head(4)).norm() < 1e-12);
  CHECK((b.a[1][1] * x.segment(4, 5) - rhs.segment(4, 5)).norm() < 1e-12);
  CHECK((b.a[2][2] * x.tail(6) - rhs.tail(6)).norm() < 1e-12);

  const BlockLduPreconditioner p = sweep_of(b);
  std::vector<double> y(15);
  p.apply(std::span<const double>(rhs.data(), 15), y);
  for (int i = 0; i < 15; ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("sweep equals the exact LDU with dropped terms") {
  const DenseBlocks b = random_dense_blocks({6, 7, 8}, 4, true);
  const Eigen::VectorXd rhs = random_vector(21, 3);
  const Eigen::VectorXd ref = exact_ldu_reference(b, rhs, LduVariant{false, false, false});
  const BlockLduPreconditioner p = sweep_of(b);
  std::vector<double> y(21);
  p.apply(std::span<const double>(rhs.data(), 21), y);
  for (int i = 0; i < 21; ++i) CHECK(y[i] == doctest::Approx(ref[i]).epsilon(1e-11));
}

TEST_CASE("GMRES with the sweep on dense block systems") {
  for (unsigned seed = 10; seed < 15; ++seed) {
    const DenseBlocks b = random_dense_blocks({10, 10, 10}, seed, true);
    const SparseMatrix a = SparseMatrix::from_dense(b.assemble());
    const BlockLduPreconditioner p = sweep_of(b);
    const Eigen::VectorXd rhs = random_vector(30, seed);
    const auto r = gmres(as_operator(a), p.as_operator(), std::span<const double>(rhs.data(), 30),
                         GmresOptions{1e10, 100, 0});
    CHECK(r.converged);
    CHECK(r.iterations <= 5);
  }
}

TEST_CASE("solid Schur solver") {
  const SparseMatrix id = SparseMatrix::identity(2);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2, 2);
  k.diagonal() << 1, 2;
  const double rho = 1e4, dt = 0.01, theta = 0.51;
  const std::vector<double> r{1.0, -2.0, 0.5, 3.0};
  std::vector<double> x(4);

  SUBCASE("decoupled limit") {
    const auto s = SolidSchurSolver::from_matrices(id, SparseMatrix::from_dense(Eigen::MatrixXd::Zero(2, 2)), rho, dt,
                                                   theta, exact());
    s.apply(r, x);
    for (int i = 0; i < 2; ++i) {
      CHECK(x[i] == doctest::Approx(r[i] / rho).epsilon(1e-14));
      CHECK(x[2 + i] == doctest::Approx(r[2 + i] + dt * theta * x[i]).epsilon(1e-14));
    }
  }
  SUBCASE("dense oracle") {
    const SparseMatrix ks = SparseMatrix::from_dense(k);
    const auto s = SolidSchurSolver::from_matrices(id, ks, rho, dt, theta, exact());
    s.apply(r, x);
    const Eigen::MatrixXd a = SolidSchurSolver::block_matrix(id, ks, rho, dt, theta).to_dense();
    const Eigen::VectorXd ref = a.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(r.data(), 4));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(x[i] - ref[i]) <= 1e-12 * ref.cwiseAbs().maxCoeff());
  }
  SUBCASE("vanishing step") {
    Eigen::MatrixXd m(2, 2);
    m << 2, 0.5, 0.5, 1;
    const SparseMatrix ms = SparseMatrix::from_dense(m);
    const auto s = SolidSchurSolver::from_matrices(ms, SparseMatrix::from_dense(k), rho, 1e-12, 0.5, exact());
    s.apply(r, x);
    const Eigen::Vector2d xv = m.inverse() * Eigen::Vector2d(r[0], r[1]) / rho;
    const Eigen::Vector2d xu = m.inverse() * Eigen::Vector2d(r[2], r[3]);
    for (int i = 0; i < 2; ++i) {
      CHECK(x[i] == doctest::Approx(xv[i]).epsilon(1e-9));
      CHECK(x[2 + i] == doctest::Approx(xu[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("fluid Schur solver") {
  SUBCASE("no pressure coupling") {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(4, 4);
    f.topLeftCorner(3, 3) << 4, 1, 0, 1, 5, 1, 0, 1, 6;
    f(3, 3) = 2.0;
    const FluidSchurSolver s(SparseMatrix::from_dense(f), {0, 1, 2}, {3}, exact(), UzawaConfig{});
    const std::vector<double> r{1, 2, 3, 4};
    std::vector<double> x(4);
    s.apply(r, x);
    const Eigen::Vector3d ref = f.topLeftCorner(3, 3).partialPivLu().solve(Eigen::Vector3d(1, 2, 3));
    for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
  SUBCASE("one-cell Stokes system") {
    const Mesh mesh = build_single_cell_mesh(2, Subdomain::Fluid, BoundaryTag::Outflow);
    const DofMap dofs(mesh, ElementPair{2}, DofOptions{true});
    const FsiAssembler a(mesh, dofs, MaterialParams{});
    const FsiState s = FsiState::zero(dofs);
    const BlockSystem sys = extract_blocks(a.jacobian(s, s, ThetaStep{0.01, 0.5}), dofs);
    std::vector<Index> v, p;
    const auto& fl = sys.layout.dofs[static_cast<int>(BlockClass::Fluid)];
    for (std::size_t k = 0; k < fl.size(); ++k) (dofs.field(fl[k]) == Field::P ? p : v).push_back(k);
    REQUIRE(!p.empty());
    const FluidSchurSolver fs(sys.fluid(), v, p, exact(), UzawaConfig{1e12, 500, 0});
    const Index n = sys.fluid().rows();
    const Eigen::VectorXd r = random_vector(n, 8);
    std::vector<double> x(n);
    fs.apply(std::span<const double>(r.data(), n), x);
    const Eigen::VectorXd ref = sys.fluid().to_dense().partialPivLu().solve(r);
    const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
    CHECK((xv - ref).norm() <= 1e-6 * ref.norm());
  }
}

TEST_CASE("block-LDU GMRES on the coarse FSI-2 Jacobian") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  const FsiAssembler a(mesh, dofs, MaterialParams{});
  const FsiState prev = FsiState::zero(dofs);
  FsiState s = prev;
  s.t = 2.0;
  inject_dirichlet(s.x, dofs, s.t, InflowSpec{});
  const ThetaStep step{0.005, 0.505};
  auto r = a.residual(s, prev, step);
  for (double& v : r) v = -v;
  LinearSolver ls(dofs, LinearSolverConfig{});
  ls.setup(a.jacobian(s, prev, step), step.dt * step.theta);
  const auto dx = ls.solve(r);
  CHECK(ls.last_iterations() <= 200);
  const auto ct = ls.component_times();
  CHECK(ct.fluid > 0.0);
  (void)dx;
}
