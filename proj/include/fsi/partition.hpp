#pragma once

#include <string>

#include "fsi/dofmap.hpp"

namespace fsi {

enum class PartitionStrategy : std::uint8_t {
  Shared,   ///< every rank owns a piece of both subdomains
  Split,    ///< every rank owns cells of one subdomain only
  Default,  ///< subdomains ignored
};

const char* to_string(PartitionStrategy s);
PartitionStrategy partition_strategy_from_string(const std::string& s);

struct Partition {
  int n_parts = 1;
  PartitionStrategy strategy = PartitionStrategy::Default;
  std::vector<int> owner;                    ///< per cell
  std::vector<std::vector<Index>> ghosts;    ///< per rank, sorted

  std::vector<Index> owned_cells(int rank) const;
};

/// Recursive coordinate bisection of `cells` (by centroid) into `n_parts`
/// pieces; returns the piece index of each listed cell.
std::vector<int> recursive_bisection(const Mesh& mesh, std::span<const Index> cells, int n_parts);

/// Splits the mesh into `n_parts` ranks with the given strategy. Throws
/// ConfigError when a subset that must be divided has fewer cells than ranks.
Partition partition_mesh(const Mesh& mesh, int n_parts, PartitionStrategy strategy);

/// For every rank, the cells it does not own that share a node with one of
/// its owned cells.
std::vector<std::vector<Index>> ghost_layer(const Mesh& mesh, std::span<const int> owner, int n_parts);

/// Owner of every dof: the lowest rank among the cells containing it.
std::vector<int> dof_owners(const Partition& p, const DofMap& dofs);

/// Dofs each rank reads: those of its owned and ghost cells, sorted.
std::vector<std::vector<Index>> relevant_dofs(const Partition& p, const DofMap& dofs);

struct ImbalanceReport {
  std::vector<Index> dofs_per_rank;
  double ratio = 1.0;          ///< max / mean owned dofs
  Index cross_rank_facets = 0;  ///< interior facets whose cells sit on different ranks
};

ImbalanceReport imbalance(const Partition& p, const Mesh& mesh, const DofMap& dofs);

}  // namespace fsi
