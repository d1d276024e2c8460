#include <doctest.h>

#include <algorithm>
#include <set>

#include "fsi/partition.hpp"

using namespace fsi;

namespace {

Mesh two_cells() {
  std::vector<Point> nodes{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 1, 0}};
  std::vector<Index> cells{0, 1, 3, 4, 1, 2, 4, 5};
  std::vector<BoundaryFacet> b{{0, 0, BoundaryTag::Inflow}, {0, 2, BoundaryTag::Bottom}, {0, 3, BoundaryTag::Top},
                               {1, 1, BoundaryTag::Outflow}, {1, 2, BoundaryTag::Bottom}, {1, 3, BoundaryTag::Top}};
  return Mesh(2, nodes, cells, {Subdomain::Fluid, Subdomain::Fluid}, b);
}

bool share_node(const Mesh& m, Index a, Index b) {
  for (Index x : m.cell(a))
    for (Index y : m.cell(b))
      if (x == y) return true;
  return false;
}

}  // namespace

TEST_CASE("default split of four cells") {
  const Mesh mesh = refine_uniform(build_single_cell_mesh(2, Subdomain::Fluid));
  const Partition p = partition_mesh(mesh, 2, PartitionStrategy::Default);
  CHECK(p.owned_cells(0).size() == 2);
  CHECK(p.owned_cells(1).size() == 2);
}

TEST_CASE("split strategy on FSI-2") {
  const Mesh mesh = build_fsi2_mesh(1);
  const Partition p = partition_mesh(mesh, 2, PartitionStrategy::Split);
  for (Index c : p.owned_cells(0)) CHECK(mesh.subdomain(c) == Subdomain::Fluid);
  for (Index c : p.owned_cells(1)) CHECK(mesh.subdomain(c) == Subdomain::Solid);
  CHECK(mesh.count_cells(Subdomain::Solid) < mesh.count_cells(Subdomain::Fluid) / 10);
}

TEST_CASE("shared strategy gives every rank both subdomains") {
  const Mesh mesh = build_fsi2_mesh(1);
  const Partition p = partition_mesh(mesh, 4, PartitionStrategy::Shared);
  for (int r = 0; r < 4; ++r) {
    std::set<Subdomain> seen;
    for (Index c : p.owned_cells(r)) seen.insert(mesh.subdomain(c));
    CHECK(seen.size() == 2);
  }
}

TEST_CASE("one part") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  for (auto s : {PartitionStrategy::Shared, PartitionStrategy::Split, PartitionStrategy::Default}) {
    const Partition p = partition_mesh(mesh, 1, s);
    CHECK(std::ranges::all_of(p.owner, [](int o) { return o == 0; }));
    REQUIRE(p.ghosts.size() == 1);
    CHECK(p.ghosts[0].empty());
    CHECK(imbalance(p, mesh, dofs).ratio == 1.0);
  }
}

TEST_CASE("too many parts is a configuration error") {
  const Mesh mesh = build_fsi2_mesh(0);
  CHECK_THROWS_AS(partition_mesh(mesh, mesh.count_cells(Subdomain::Solid) + 1, PartitionStrategy::Shared),
                  ConfigError);
  CHECK_THROWS_AS(partition_mesh(mesh, 0, PartitionStrategy::Default), ConfigError);
}

TEST_CASE("ghost layers") {
  const Mesh mesh = two_cells();
  const std::vector<int> owner{0, 1};
  const auto g = ghost_layer(mesh, owner, 2);
  CHECK(g[0] == std::vector<Index>{1});
  CHECK(g[1] == std::vector<Index>{0});

  const Mesh fsi = build_fsi2_mesh(1);
  const Partition p = partition_mesh(fsi, 4, PartitionStrategy::Shared);
  for (int r = 0; r < 4; ++r) {
    const auto owned = p.owned_cells(r);
    std::set<Index> ghosts(p.ghosts[r].begin(), p.ghosts[r].end());
    for (Index c = 0; c < fsi.n_cells(); ++c) {
      if (p.owner[c] == r) continue;
      const bool adjacent = std::ranges::any_of(owned, [&](Index o) { return share_node(fsi, o, c); });
      CHECK(adjacent == (ghosts.count(c) == 1));
    }
  }
}

TEST_CASE("dof ownership") {
  const Mesh mesh = build_fsi2_mesh(0);
  const DofMap dofs(mesh, ElementPair{2});
  const Partition p = partition_mesh(mesh, 3, PartitionStrategy::Default);
  const auto owner = dof_owners(p, dofs);
  CHECK(owner.size() == static_cast<std::size_t>(dofs.n_dofs()));
  const auto rel = relevant_dofs(p, dofs);
  for (Index i = 0; i < dofs.n_dofs(); ++i) CHECK(std::ranges::binary_search(rel[owner[i]], i));
}

TEST_CASE("imbalance of an even split") {
  // 4x4 unit square split into two 2x4 halves. Dofs on the cut go to the
  // lower rank, so the excess over 1.0 is exactly the cut's share.
  const Mesh mesh = refine_uniform(refine_uniform(build_single_cell_mesh(2, Subdomain::Fluid)));
  const DofMap dofs(mesh, ElementPair{2}, DofOptions{true});
  const Partition p = partition_mesh(mesh, 2, PartitionStrategy::Default);
  CHECK(p.owned_cells(0).size() == 8);
  const auto rep = imbalance(p, mesh, dofs);
  const Index cut_nodes = 9;  // Q2 nodes on a cut of four cells
  const double mean = dofs.n_dofs() / 2.0;
  CHECK(rep.ratio == doctest::Approx((mean + cut_nodes * 2 * 2 / 2.0) / mean).epsilon(1e-14));
  CHECK(rep.ratio < 1.1);
  CHECK(rep.cross_rank_facets == 4);
}

TEST_CASE("split is less balanced than shared") {
  const Mesh mesh = build_fsi2_mesh(1);
  const DofMap dofs(mesh, ElementPair{2});
  for (int n : {2, 4})
    CHECK(imbalance(partition_mesh(mesh, n, PartitionStrategy::Split), mesh, dofs).ratio >=
          imbalance(partition_mesh(mesh, n, PartitionStrategy::Shared), mesh, dofs).ratio);
}
