#include "fsi/blocks.hpp"

namespace fsi {

BlockLayout BlockLayout::from_classes(std::span<const BlockClass> classes) {
  BlockLayout l;
  l.block.resize(classes.size());
  l.local.resize(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const int b = static_cast<int>(classes[i]);
    l.block[i] = b;
    l.local[i] = static_cast<Index>(l.dofs[b].size());
    l.dofs[b].push_back(static_cast<Index>(i));
  }
  return l;
}

std::array<std::vector<double>, kNumBlocks> BlockLayout::split(std::span<const double> x) const {
  std::array<std::vector<double>, kNumBlocks> out;
  for (int b = 0; b < kNumBlocks; ++b) {
    out[b].resize(dofs[b].size());
    for (std::size_t k = 0; k < dofs[b].size(); ++k) out[b][k] = x[dofs[b][k]];
  }
  return out;
}

std::vector<double> BlockLayout::join(const std::array<std::vector<double>, kNumBlocks>& parts) const {
  std::vector<double> x(block.size());
  for (int b = 0; b < kNumBlocks; ++b)
    for (std::size_t k = 0; k < dofs[b].size(); ++k) x[dofs[b][k]] = parts[b][k];
  return x;
}

Index BlockSystem::nnz() const {
  Index n = 0;
  for (const auto& row : blocks)
    for (const auto& b : row) n += b.nnz();
  return n;
}

BlockSystem extract_blocks(const SparseMatrix& a, BlockLayout layout) {
  if (a.rows() != layout.n() || a.cols() != layout.n())
    throw ConfigError("matrix size does not match the block layout");
  BlockSystem sys;
  const auto& ptr = a.row_ptr();
  const auto& col = a.col_idx();
  const auto& val = a.values();
  for (int rb = 0; rb < kNumBlocks; ++rb) {
    std::array<std::vector<Index>, kNumBlocks> bp, bc;
    std::array<std::vector<double>, kNumBlocks> bv;
    for (int cb = 0; cb < kNumBlocks; ++cb) bp[cb].push_back(0);
    for (Index g : layout.dofs[rb]) {
      for (Index k = ptr[g]; k < ptr[g + 1]; ++k) {
        const int cb = layout.block[col[k]];
        bc[cb].push_back(layout.local[col[k]]);
        bv[cb].push_back(val[k]);
      }
      for (int cb = 0; cb < kNumBlocks; ++cb) bp[cb].push_back(static_cast<Index>(bc[cb].size()));
    }
    for (int cb = 0; cb < kNumBlocks; ++cb)
      sys.blocks[rb][cb] =
          SparseMatrix(layout.size(rb), layout.size(cb), std::move(bp[cb]), std::move(bc[cb]), std::move(bv[cb]));
  }
  sys.layout = std::move(layout);
  return sys;
}

SparseMatrix merge_blocks(const BlockSystem& sys) {
  const auto& l = sys.layout;
  const Index n = l.n();
  std::vector<Index> ptr(n + 1, 0);
  for (Index g = 0; g < n; ++g) {
    const int rb = l.block[g];
    const Index r = l.local[g];
    Index cnt = 0;
    for (int cb = 0; cb < kNumBlocks; ++cb) {
      const auto& m = sys.blocks[rb][cb];
      cnt += m.row_ptr()[r + 1] - m.row_ptr()[r];
    }
    ptr[g + 1] = ptr[g] + cnt;
  }
  std::vector<Index> col(ptr[n]);
  std::vector<double> val(ptr[n]);
  std::vector<std::pair<Index, double>> row;
  for (Index g = 0; g < n; ++g) {
    const int rb = l.block[g];
    const Index r = l.local[g];
    row.clear();
    for (int cb = 0; cb < kNumBlocks; ++cb) {
      const auto& m = sys.blocks[rb][cb];
      for (Index k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k)
        row.emplace_back(l.dofs[cb][m.col_idx()[k]], m.values()[k]);
    }
    std::sort(row.begin(), row.end());
    for (std::size_t k = 0; k < row.size(); ++k) {
      col[ptr[g] + k] = row[k].first;
      val[ptr[g] + k] = row[k].second;
    }
  }
  return SparseMatrix(n, n, std::move(ptr), std::move(col), std::move(val));
}

}  // namespace fsi
