#include "fsi/dense_ldu.hpp"

#include <random>

namespace fsi {

namespace {

class Inverse {
 public:
  Inverse(const Eigen::MatrixXd& a, const char* name) : lu_(a) {
    if (a.rows() > 0 && !lu_.isInvertible()) throw FactorizationError(std::string("singular block ") + name);
  }
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const { return b.rows() == 0 ? b : Eigen::MatrixXd(lu_.solve(b)); }

 private:
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace

Eigen::MatrixXd DenseBlocks::assemble() const {
  const Eigen::Index n0 = size(0), n1 = size(1), n2 = size(2);
  const std::array<Eigen::Index, 3> off{0, n0, n0 + n1};
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n0 + n1 + n2, n0 + n1 + n2);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (a[r][c].size() > 0) out.block(off[r], off[c], size(r), size(c)) = a[r][c];
  return out;
}

Eigen::VectorXd exact_ldu_reference(const DenseBlocks& blocks, const Eigen::VectorXd& r, LduVariant variant) {
  const Eigen::Index nm = blocks.size(0), ns = blocks.size(1), nf = blocks.size(2);
  if (r.size() != nm + ns + nf) throw ConfigError("right-hand side does not match the block sizes");
  auto get = [&](int i, int j) -> Eigen::MatrixXd {
    const auto& b = blocks.a[i][j];
    return b.size() > 0 ? b : Eigen::MatrixXd::Zero(blocks.size(i), blocks.size(j));
  };
  const Eigen::MatrixXd m = get(0, 0), c_ms = get(0, 1), c_mf = get(0, 2);
  const Eigen::MatrixXd c_sm = variant.keep_csm ? get(1, 0) : Eigen::MatrixXd::Zero(ns, nm);
  const Eigen::MatrixXd s = get(1, 1), c_sf = get(1, 2);
  const Eigen::MatrixXd c_fm = get(2, 0), c_fs = get(2, 1), f = get(2, 2);

  const Inverse m_inv(m, "M");
  const Eigen::MatrixXd s_t = s - c_sm * m_inv.solve(c_ms);
  const Inverse s_inv(s_t, "S - C_sm M^-1 C_ms");
  const Eigen::MatrixXd c_sf_t = c_sf - c_sm * m_inv.solve(c_mf);
  const Eigen::MatrixXd c_fs_t = variant.schur_corrected_cfs ? Eigen::MatrixXd(c_fs - c_fm * m_inv.solve(c_ms)) : c_fs;
  Eigen::MatrixXd x = f - c_fm * m_inv.solve(c_mf);
  if (variant.schur_perturbation) x -= c_fs_t * s_inv.solve(c_sf_t);
  const Inverse x_inv(x, "X");

  const Eigen::VectorXd r_m = r.head(nm), r_s = r.segment(nm, ns), r_f = r.tail(nf);
  // L^{-1}
  const Eigen::VectorXd y_m = r_m;
  const Eigen::VectorXd y_s = r_s - c_sm * m_inv.solve(y_m);
  const Eigen::VectorXd y_f = r_f - c_fm * m_inv.solve(y_m) - c_fs_t * s_inv.solve(y_s);
  // D^{-1}
  const Eigen::VectorXd z_m = m_inv.solve(y_m);
  const Eigen::VectorXd z_s = s_inv.solve(y_s);
  const Eigen::VectorXd z_f = x_inv.solve(y_f);
  // U^{-1}
  Eigen::VectorXd out(nm + ns + nf);
  const Eigen::VectorXd x_f = z_f;
  const Eigen::VectorXd x_s = z_s - s_inv.solve(c_sf_t * x_f);
  const Eigen::VectorXd x_m = z_m - m_inv.solve(c_ms * x_s + c_mf * x_f);
  out << x_m, x_s, x_f;
  return out;
}

DenseBlocks random_dense_blocks(std::array<int, 3> sizes, unsigned seed, bool zero_csm) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseBlocks b;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      Eigen::MatrixXd m(sizes[r], sizes[c]);
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = u(gen);
      if (r == c) m.diagonal().array() += 2.0 * sizes[r] + 2.0 * (sizes[0] + sizes[1] + sizes[2]);
      if (r == 0 && c == 2) m.setZero();
      if (zero_csm && r == 1 && c == 0) m.setZero();
      b.a[r][c] = m;
    }
  return b;
}

}  // namespace fsi
