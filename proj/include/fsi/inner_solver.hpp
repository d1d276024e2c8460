#pragma once

#include <memory>
#include <string>

#include "fsi/krylov.hpp"

namespace fsi {

enum class InnerKind : std::uint8_t {
  SparseDirect,  ///< sparse LU, exact up to rounding
  IluGmres,      ///< ILU(0)-preconditioned GMRES to `rel_reduction`
  Jacobi,        ///< one diagonal scaling; test use only
};

const char* to_string(InnerKind k);
InnerKind inner_kind_from_string(const std::string& s);

struct InnerConfig {
  InnerKind kind = InnerKind::SparseDirect;
  double rel_reduction = 1e4;
  int max_iter = 500;
  int restart = 100;
};

/// Approximate inverse of one block.
class InnerSolver {
 public:
  virtual ~InnerSolver() = default;
  virtual void apply(std::span<const double> b, std::span<double> x) const = 0;
  virtual Index size() const = 0;
  std::vector<double> solve(std::span<const double> b) const {
    std::vector<double> x(b.size(), 0.0);
    apply(b, x);
    return x;
  }
};

/// `name` identifies the block in error messages.
std::unique_ptr<InnerSolver> make_inner_solver(const SparseMatrix& a, const InnerConfig& config,
                                               const std::string& name);

}  // namespace fsi
