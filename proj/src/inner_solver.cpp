#include "fsi/inner_solver.hpp"

#include <Eigen/SparseLU>

namespace fsi {

const char* to_string(InnerKind k) {
  switch (k) {
    case InnerKind::SparseDirect: return "direct";
    case InnerKind::IluGmres: return "ilu_gmres";
    case InnerKind::Jacobi: return "jacobi";
  }
  return "?";
}

InnerKind inner_kind_from_string(const std::string& s) {
  if (s == "direct") return InnerKind::SparseDirect;
  if (s == "ilu_gmres") return InnerKind::IluGmres;
  if (s == "jacobi") return InnerKind::Jacobi;
  throw ConfigError("unknown inner solver '" + s + "' (expected direct, ilu_gmres or jacobi)");
}

namespace {

class DirectSolver final : public InnerSolver {
 public:
  DirectSolver(const SparseMatrix& a, const std::string& name) : n_(a.rows()) {
    if (n_ == 0) return;
    mat_ = a.to_eigen();
    mat_.makeCompressed();
    lu_.analyzePattern(mat_);
    lu_.factorize(mat_);
    if (lu_.info() != Eigen::Success)
      throw FactorizationError("sparse LU of block " + name + " failed: " + lu_.lastErrorMessage());
  }
  void apply(std::span<const double> b, std::span<double> x) const override {
    if (n_ == 0) return;
    const Eigen::Map<const Eigen::VectorXd> bb(b.data(), n_);
    Eigen::Map<Eigen::VectorXd>(x.data(), n_) = lu_.solve(bb);
  }
  Index size() const override { return n_; }

 private:
  Index n_;
  Eigen::SparseMatrix<double> mat_;
  // solve() is logically const; Eigen keeps it non-const in older releases.
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

class IluGmresSolver final : public InnerSolver {
 public:
  IluGmresSolver(const SparseMatrix& a, const InnerConfig& c, std::string name)
      : a_(a), ilu_(a), options_{c.rel_reduction, c.max_iter, c.restart}, name_(std::move(name)) {}
  void apply(std::span<const double> b, std::span<double> x) const override {
    if (a_.rows() == 0) return;
    const auto op = as_operator(a_);
    const LinearOperator pre = [this](std::span<const double> r, std::span<double> z) { ilu_.apply(r, z); };
    try {
      const auto res = gmres(op, pre, b, options_);
      std::copy(res.x.begin(), res.x.end(), x.begin());
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("inner solver of block " + name_ + ": " + e.what(), e.best());
    }
  }
  Index size() const override { return a_.rows(); }

 private:
  SparseMatrix a_;
  Ilu0 ilu_;
  GmresOptions options_;
  std::string name_;
};

class JacobiSolver final : public InnerSolver {
 public:
  JacobiSolver(const SparseMatrix& a, const std::string& name) : inv_diag_(a.diagonal()) {
    for (std::size_t i = 0; i < inv_diag_.size(); ++i) {
      if (inv_diag_[i] == 0.0) throw FactorizationError("zero diagonal in block " + name);
      inv_diag_[i] = 1.0 / inv_diag_[i];
    }
  }
  void apply(std::span<const double> b, std::span<double> x) const override {
    for (std::size_t i = 0; i < inv_diag_.size(); ++i) x[i] = inv_diag_[i] * b[i];
  }
  Index size() const override { return static_cast<Index>(inv_diag_.size()); }

 private:
  std::vector<double> inv_diag_;
};

}  // namespace

std::unique_ptr<InnerSolver> make_inner_solver(const SparseMatrix& a, const InnerConfig& config,
                                               const std::string& name) {
  if (a.rows() != a.cols()) throw FactorizationError("block " + name + " is not square");
  switch (config.kind) {
    case InnerKind::SparseDirect: return std::make_unique<DirectSolver>(a, name);
    case InnerKind::IluGmres: return std::make_unique<IluGmresSolver>(a, config, name);
    case InnerKind::Jacobi: return std::make_unique<JacobiSolver>(a, name);
  }
  throw ConfigError("unknown inner solver kind");
}

}  // namespace fsi
