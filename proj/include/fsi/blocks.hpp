#pragma once

#include <algorithm>
#include <array>

#include "fsi/dofmap.hpp"
#include "fsi/sparse.hpp"

namespace fsi {

/// Routing of global dofs into the mesh/solid/fluid blocks. Within a block,
/// dofs keep their global order.
struct BlockLayout {
  std::array<std::vector<Index>, kNumBlocks> dofs;
  std::vector<int> block;    ///< per global dof
  std::vector<Index> local;  ///< per global dof, index within its block

  static BlockLayout from_classes(std::span<const BlockClass> classes);
  static BlockLayout from_dofmap(const DofMap& dofs) { return from_classes(dofs.block_classes()); }

  Index n() const noexcept { return static_cast<Index>(block.size()); }
  Index size(int b) const { return static_cast<Index>(dofs[b].size()); }
  std::array<std::vector<double>, kNumBlocks> split(std::span<const double> x) const;
  std::vector<double> join(const std::array<std::vector<double>, kNumBlocks>& parts) const;
};

/// 3x3 block view {M, C_ms, C_mf; C_sm, S, C_sf; C_fm, C_fs, F} of a matrix
/// assembled on the DofMap numbering.
struct BlockSystem {
  BlockLayout layout;
  std::array<std::array<SparseMatrix, kNumBlocks>, kNumBlocks> blocks;

  const SparseMatrix& block(BlockClass r, BlockClass c) const {
    return blocks[static_cast<int>(r)][static_cast<int>(c)];
  }
  const SparseMatrix& mesh() const { return block(BlockClass::Mesh, BlockClass::Mesh); }
  const SparseMatrix& solid() const { return block(BlockClass::Solid, BlockClass::Solid); }
  const SparseMatrix& fluid() const { return block(BlockClass::Fluid, BlockClass::Fluid); }
  /// Stored entries over all blocks.
  Index nnz() const;
};

BlockSystem extract_blocks(const SparseMatrix& a, BlockLayout layout);
inline BlockSystem extract_blocks(const SparseMatrix& a, const DofMap& dofs) {
  return extract_blocks(a, BlockLayout::from_dofmap(dofs));
}
/// Inverse of extract_blocks.
SparseMatrix merge_blocks(const BlockSystem& sys);

}  // namespace fsi
