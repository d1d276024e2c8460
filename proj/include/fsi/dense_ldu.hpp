#pragma once

#include <array>

#include <Eigen/Dense>

#include "fsi/common.hpp"

namespace fsi {

/// Dense 3x3 block system in mesh, solid, fluid order: a[r][c].
struct DenseBlocks {
  std::array<std::array<Eigen::MatrixXd, 3>, 3> a;

  Eigen::MatrixXd assemble() const;
  Eigen::Index size(int b) const { return a[b][b].rows(); }
};

/// Which terms of the full block factorization are kept. All true gives the
/// exact solve; all false gives the simplified sweep with exact block solves.
struct LduVariant {
  bool keep_csm = true;             ///< C_sm in the solid Schur complement
  bool schur_corrected_cfs = true;  ///< C_fs - C_fm M^{-1} C_ms instead of C_fs
  bool schur_perturbation = true;   ///< X = F - C~_fs S~^{-1} C_sf instead of X = F
};

/// Applies the block LDU factorization with Schur complements
///   S~ = S - C_sm M^{-1} C_ms,  X = F - C~_fs S~^{-1} C_sf
/// to r. Throws FactorizationError on a singular pivot block.
Eigen::VectorXd exact_ldu_reference(const DenseBlocks& blocks, const Eigen::VectorXd& r, LduVariant variant = {});

/// Random well-conditioned dense block system (diagonally dominant pivots).
DenseBlocks random_dense_blocks(std::array<int, 3> sizes, unsigned seed, bool zero_csm = false);

}  // namespace fsi
