#include "fsi/block_precond.hpp"

#include <chrono>

namespace fsi {

namespace {

std::vector<double> gather(std::span<const double> x, const std::vector<Index>& idx) {
  std::vector<double> out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = x[idx[k]];
  return out;
}

void scatter(std::span<const double> part, const std::vector<Index>& idx, std::span<double> x) {
  for (std::size_t k = 0; k < idx.size(); ++k) x[idx[k]] = part[k];
}

bool row_has_value(const SparseMatrix& a, Index i) {
  for (Index k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
    if (a.values()[k] != 0.0) return true;
  return false;
}

class Timer {
 public:
  explicit Timer(double& acc) : acc_(acc), start_(std::chrono::steady_clock::now()) {}
  ~Timer() { acc_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  double& acc_;
  std::chrono::steady_clock::time_point start_;
};

class SolidSchurInner final : public InnerSolver {
 public:
  explicit SolidSchurInner(SolidSchurSolver s) : s_(std::move(s)) {}
  void apply(std::span<const double> b, std::span<double> x) const override { s_.apply(b, x); }
  Index size() const override { return s_.size(); }

 private:
  SolidSchurSolver s_;
};

class FluidSchurInner final : public InnerSolver {
 public:
  explicit FluidSchurInner(FluidSchurSolver f) : f_(std::move(f)) {}
  void apply(std::span<const double> b, std::span<double> x) const override { f_.apply(b, x); }
  Index size() const override { return f_.size(); }

 private:
  FluidSchurSolver f_;
};

}  // namespace

SolidSchurSolver::SolidSchurSolver(const SparseMatrix& s, std::vector<Index> v_local, std::vector<Index> u_local,
                                   double dt_theta, const InnerConfig& inner)
    : n_(s.rows()), v_(std::move(v_local)), u_(std::move(u_local)) {
  if (v_.size() != u_.size()) throw ConfigError("solid block: velocity and displacement dofs are not paired");
  if (static_cast<Index>(v_.size() + u_.size()) != n_) throw ConfigError("solid block: pairing does not cover the block");
  const SparseMatrix a_vv = s.submatrix(v_, v_);
  a_vu_ = s.submatrix(v_, u_);
  a_uv_ = s.submatrix(u_, v_);
  const SparseMatrix a_uu = s.submatrix(u_, u_);
  // Columns k of A_vu and A_vv refer to the same node/component pair. Rows
  // of A_uv without coupling (Dirichlet displacement) drop out.
  SparseMatrix coupled = a_vu_;
  std::vector<char> keep(u_.size());
  for (std::size_t k = 0; k < u_.size(); ++k) keep[k] = row_has_value(a_uv_, static_cast<Index>(k));
  for (Index i = 0; i < coupled.rows(); ++i)
    for (Index k = coupled.row_ptr()[i]; k < coupled.row_ptr()[i + 1]; ++k)
      if (!keep[coupled.col_idx()[k]]) coupled.values()[k] = 0.0;
  schur_ = add(1.0, a_vv, dt_theta, coupled);
  uu_inv_ = make_inner_solver(a_uu, inner, "S_uu");
  schur_inv_ = make_inner_solver(schur_, inner, "S_schur");
}

SparseMatrix SolidSchurSolver::block_matrix(const SparseMatrix& mass, const SparseMatrix& k_vu, double rho_s,
                                            double dt, double theta) {
  const Index n = mass.rows();
  std::vector<Triplet> t;
  auto put = [&](const SparseMatrix& m, double scale, Index r0, Index c0) {
    for (Index i = 0; i < m.rows(); ++i)
      for (Index k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k)
        t.push_back({r0 + i, c0 + m.col_idx()[k], scale * m.values()[k]});
  };
  put(mass, rho_s, 0, 0);
  put(k_vu, dt * theta, 0, n);
  put(mass, -dt * theta, n, 0);
  put(mass, 1.0, n, n);
  return SparseMatrix::from_triplets(2 * n, 2 * n, std::move(t));
}

SolidSchurSolver SolidSchurSolver::from_matrices(const SparseMatrix& mass, const SparseMatrix& k_vu, double rho_s,
                                                 double dt, double theta, const InnerConfig& inner) {
  const Index n = mass.rows();
  std::vector<Index> v(n), u(n);
  for (Index i = 0; i < n; ++i) {
    v[i] = i;
    u[i] = n + i;
  }
  return SolidSchurSolver(block_matrix(mass, k_vu, rho_s, dt, theta), std::move(v), std::move(u), dt * theta, inner);
}

void SolidSchurSolver::apply(std::span<const double> r, std::span<double> x) const {
  const auto rv = gather(r, v_);
  const auto ru = gather(r, u_);
  // x_v = Schur^{-1} (r_v - A_vu A_uu^{-1} r_u)
  const auto w = uu_inv_->solve(ru);
  auto rhs = rv;
  const auto aw = a_vu_ * w;
  axpy(-1.0, aw, rhs);
  const auto xv = schur_inv_->solve(rhs);
  // x_u = A_uu^{-1} (r_u - A_uv x_v)
  auto rhs_u = ru;
  const auto ax = a_uv_ * xv;
  axpy(-1.0, ax, rhs_u);
  const auto xu = uu_inv_->solve(rhs_u);
  scatter(xv, v_, x);
  scatter(xu, u_, x);
}

FluidSchurSolver::FluidSchurSolver(const SparseMatrix& f, std::vector<Index> v_local, std::vector<Index> p_local,
                                   const InnerConfig& velocity, const UzawaConfig& uzawa)
    : n_(f.rows()), v_(std::move(v_local)), p_(std::move(p_local)), uzawa_(uzawa) {
  if (static_cast<Index>(v_.size() + p_.size()) != n_) throw ConfigError("fluid block: v/p split does not cover the block");
  const SparseMatrix a = f.submatrix(v_, v_);
  b_ = f.submatrix(v_, p_);
  c_ = f.submatrix(p_, v_);
  d_ = f.submatrix(p_, p_);
  a_inv_ = make_inner_solver(a, velocity, "F_vv");
  pressure_coupled_ = b_.count_nonzero_values() > 0 && c_.count_nonzero_values() > 0;
  if (!pressure_coupled_ || p_.empty()) return;
  std::vector<double> inv_diag = a.diagonal();
  for (double& d : inv_diag) d = d != 0.0 ? 1.0 / d : 0.0;
  const SparseMatrix approx = add(1.0, d_, -1.0, multiply(c_, scale_rows(b_, inv_diag)));
  try {
    approx_schur_inv_ = make_inner_solver(approx, InnerConfig{}, "F_pp_schur");
  } catch (const FactorizationError&) {
    approx_schur_inv_ = nullptr;  // unpreconditioned pressure iteration
  }
}

void FluidSchurSolver::apply(std::span<const double> r, std::span<double> x) const {
  const auto rv = gather(r, v_);
  const auto rp = gather(r, p_);
  std::vector<double> xp(p_.size(), 0.0);
  last_iters_ = 0;
  if (pressure_coupled_) {
    const auto y = a_inv_->solve(rv);
    auto rhs = rp;
    const auto cy = c_ * y;
    axpy(-1.0, cy, rhs);
    if (norm_2(rhs) > 0.0) {
      const LinearOperator schur = [this](std::span<const double> q, std::span<double> out) {
        const auto bq = b_ * q;
        const auto abq = a_inv_->solve(bq);
        const auto cabq = c_ * abq;
        d_.multiply(q, out);
        axpy(-1.0, cabq, out);
      };
      LinearOperator pre;
      if (approx_schur_inv_)
        pre = [this](std::span<const double> q, std::span<double> z) { approx_schur_inv_->apply(q, z); };
      try {
        const auto res = gmres(schur, pre, rhs, GmresOptions{uzawa_.rel_reduction, uzawa_.max_iter, uzawa_.restart});
        xp = res.x;
        last_iters_ = res.iterations;
      } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string("pressure Schur solve of block F: ") + e.what(), e.best());
      }
    }
  }
  auto rhs_v = rv;
  const auto bxp = b_ * xp;
  axpy(-1.0, bxp, rhs_v);
  const auto xv = a_inv_->solve(rhs_v);
  scatter(xv, v_, x);
  scatter(xp, p_, x);
}

BlockLduPreconditioner::BlockLduPreconditioner(BlockSystem sys, const DofMap& dofs, double dt_theta,
                                               const LduConfig& config)
    : sys_(std::move(sys)) {
  const auto& l = sys_.layout;
  const int dim = dofs.dim();
  m_inv_ = make_inner_solver(sys_.mesh(), config.mesh, "M");

  const int sb = static_cast<int>(BlockClass::Solid);
  if (config.solid_schur) {
    std::vector<Index> v_local, u_local;
    for (Index g : l.dofs[sb]) {
      if (dofs.field(g) != Field::U) continue;
      const Index vg = dofs.v_dof(dofs.dof_node(g), dofs.dof_component(g));
      if (l.block[vg] != sb) throw ConfigError("solid block: displacement dof without a paired velocity dof");
      u_local.push_back(l.local[g]);
      v_local.push_back(l.local[vg]);
    }
    s_inv_ = std::make_unique<SolidSchurInner>(
        SolidSchurSolver(sys_.solid(), std::move(v_local), std::move(u_local), dt_theta, config.solid));
  } else {
    s_inv_ = make_inner_solver(sys_.solid(), config.solid, "S");
  }

  const int fb = static_cast<int>(BlockClass::Fluid);
  if (config.fluid_schur) {
    std::vector<Index> v_local, p_local;
    for (Index g : l.dofs[fb]) (dofs.field(g) == Field::P ? p_local : v_local).push_back(l.local[g]);
    f_inv_ = std::make_unique<FluidSchurInner>(
        FluidSchurSolver(sys_.fluid(), std::move(v_local), std::move(p_local), config.fluid_velocity, config.uzawa));
  } else {
    f_inv_ = make_inner_solver(sys_.fluid(), config.fluid_velocity, "F");
  }
}

BlockLduPreconditioner::BlockLduPreconditioner(BlockSystem sys, std::unique_ptr<InnerSolver> m_inv,
                                               std::unique_ptr<InnerSolver> s_inv, std::unique_ptr<InnerSolver> f_inv)
    : sys_(std::move(sys)), m_inv_(std::move(m_inv)), s_inv_(std::move(s_inv)), f_inv_(std::move(f_inv)) {}

void BlockLduPreconditioner::apply(std::span<const double> r, std::span<double> x) const {
  constexpr int m = static_cast<int>(BlockClass::Mesh);
  constexpr int s = static_cast<int>(BlockClass::Solid);
  constexpr int f = static_cast<int>(BlockClass::Fluid);
  const auto& b = sys_.blocks;
  auto parts = sys_.layout.split(r);
  std::array<std::vector<double>, kNumBlocks> out;
  {
    Timer t(times_.mesh);
    out[m] = m_inv_->solve(parts[m]);
  }
  {
    Timer t(times_.solid);
    out[s] = s_inv_->solve(parts[s]);
  }
  {
    Timer t(times_.fluid);
    auto rf = parts[f];
    axpy(-1.0, b[f][m] * out[m], rf);
    axpy(-1.0, b[f][s] * out[s], rf);
    out[f] = f_inv_->solve(rf);
  }
  {
    Timer t(times_.solid);
    const auto corr = s_inv_->solve(b[s][f] * out[f]);
    axpy(-1.0, corr, out[s]);
  }
  {
    Timer t(times_.mesh);
    const auto corr = m_inv_->solve(b[m][s] * out[s]);
    axpy(-1.0, corr, out[m]);
  }
  const auto joined = sys_.layout.join(out);
  std::copy(joined.begin(), joined.end(), x.begin());
}

}  // namespace fsi
