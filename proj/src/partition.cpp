#include "fsi/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fsi {

const char* to_string(PartitionStrategy s) {
  switch (s) {
    case PartitionStrategy::Shared: return "shared";
    case PartitionStrategy::Split: return "split";
    case PartitionStrategy::Default: return "default";
  }
  return "?";
}

PartitionStrategy partition_strategy_from_string(const std::string& s) {
  if (s == "shared") return PartitionStrategy::Shared;
  if (s == "split") return PartitionStrategy::Split;
  if (s == "default") return PartitionStrategy::Default;
  throw ConfigError("unknown partition strategy '" + s + "' (expected shared, split or default)");
}

std::vector<Index> Partition::owned_cells(int rank) const {
  std::vector<Index> out;
  for (std::size_t c = 0; c < owner.size(); ++c)
    if (owner[c] == rank) out.push_back(static_cast<Index>(c));
  return out;
}

namespace {

void bisect(const std::vector<Point>& centroid, int dim, std::vector<Index>& items, std::size_t begin,
            std::size_t end, int first_part, int n_parts, std::vector<int>& part_of) {
  if (n_parts == 1) {
    for (std::size_t k = begin; k < end; ++k) part_of[items[k]] = first_part;
    return;
  }
  Point lo = centroid[items[begin]];
  Point hi = lo;
  for (std::size_t k = begin; k < end; ++k)
    for (int a = 0; a < dim; ++a) {
      lo[a] = std::min(lo[a], centroid[items[k]][a]);
      hi[a] = std::max(hi[a], centroid[items[k]][a]);
    }
  int axis = 0;
  for (int a = 1; a < dim; ++a)
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  std::stable_sort(items.begin() + begin, items.begin() + end, [&](Index x, Index y) {
    return centroid[x][axis] < centroid[y][axis] || (centroid[x][axis] == centroid[y][axis] && x < y);
  });
  const int left_parts = n_parts / 2;
  const std::size_t n = end - begin;
  const auto n_left = static_cast<std::size_t>(std::llround(static_cast<double>(n) * left_parts / n_parts));
  const std::size_t mid = begin + std::clamp<std::size_t>(n_left, left_parts, n - (n_parts - left_parts));
  bisect(centroid, dim, items, begin, mid, first_part, left_parts, part_of);
  bisect(centroid, dim, items, mid, end, first_part + left_parts, n_parts - left_parts, part_of);
}

}  // namespace

std::vector<int> recursive_bisection(const Mesh& mesh, std::span<const Index> cells, int n_parts) {
  if (n_parts < 1) throw ConfigError("number of parts must be at least 1");
  if (static_cast<Index>(cells.size()) < n_parts)
    throw ConfigError("cannot split " + std::to_string(cells.size()) + " cells into " + std::to_string(n_parts) +
                      " parts");
  std::vector<Point> centroid(mesh.n_cells());
  for (Index c : cells) centroid[c] = mesh.centroid(c);
  std::vector<Index> items(cells.begin(), cells.end());
  std::vector<int> part_of(mesh.n_cells(), -1);
  bisect(centroid, mesh.dim(), items, 0, items.size(), 0, n_parts, part_of);
  std::vector<int> out(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) out[k] = part_of[cells[k]];
  return out;
}

Partition partition_mesh(const Mesh& mesh, int n_parts, PartitionStrategy strategy) {
  if (n_parts < 1) throw ConfigError("number of parts must be at least 1");
  Partition p;
  p.n_parts = n_parts;
  p.strategy = strategy;
  p.owner.assign(mesh.n_cells(), 0);
  std::vector<Index> fluid, solid, all(mesh.n_cells());
  std::iota(all.begin(), all.end(), Index{0});
  for (Index c = 0; c < mesh.n_cells(); ++c) (mesh.subdomain(c) == Subdomain::Fluid ? fluid : solid).push_back(c);
  auto assign = [&](const std::vector<Index>& cells, int parts, int offset) {
    if (cells.empty()) return;
    const auto piece = recursive_bisection(mesh, cells, parts);
    for (std::size_t k = 0; k < cells.size(); ++k) p.owner[cells[k]] = offset + piece[k];
  };
  if (n_parts == 1) {
    // every strategy degenerates to a single rank
  } else if (strategy == PartitionStrategy::Default) {
    assign(all, n_parts, 0);
  } else if (strategy == PartitionStrategy::Shared) {
    // Fluid piece r and solid piece r go to rank r.
    assign(fluid, n_parts, 0);
    assign(solid, n_parts, 0);
  } else {
    if (fluid.empty() || solid.empty()) throw ConfigError("split partitioning needs both subdomains");
    const double share = static_cast<double>(solid.size()) / static_cast<double>(mesh.n_cells());
    const int n_solid = std::clamp(static_cast<int>(std::lround(n_parts * share)), 1, n_parts - 1);
    const int n_fluid = n_parts - n_solid;
    assign(fluid, n_fluid, 0);
    assign(solid, n_solid, n_fluid);
  }
  p.ghosts = ghost_layer(mesh, p.owner, n_parts);
  return p;
}

std::vector<std::vector<Index>> ghost_layer(const Mesh& mesh, std::span<const int> owner, int n_parts) {
  const auto n2c = node_to_cells(mesh);
  std::vector<std::vector<Index>> ghosts(n_parts);
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    const int r = owner[c];
    for (Index v : mesh.cell(c))
      for (Index other : n2c[v])
        if (owner[other] != r) ghosts[r].push_back(other);
  }
  for (auto& g : ghosts) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
  }
  return ghosts;
}

std::vector<int> dof_owners(const Partition& p, const DofMap& dofs) {
  std::vector<int> owner(dofs.n_dofs(), p.n_parts);
  const Index n_cells = static_cast<Index>(p.owner.size());
  for (Index c = 0; c < n_cells; ++c)
    for (Index d : dofs.cell_dofs(c)) owner[d] = std::min(owner[d], p.owner[c]);
  return owner;
}

std::vector<std::vector<Index>> relevant_dofs(const Partition& p, const DofMap& dofs) {
  std::vector<std::vector<Index>> out(p.n_parts);
  for (int r = 0; r < p.n_parts; ++r) {
    auto cells = p.owned_cells(r);
    cells.insert(cells.end(), p.ghosts[r].begin(), p.ghosts[r].end());
    for (Index c : cells) {
      const auto cd = dofs.cell_dofs(c);
      out[r].insert(out[r].end(), cd.begin(), cd.end());
    }
    std::sort(out[r].begin(), out[r].end());
    out[r].erase(std::unique(out[r].begin(), out[r].end()), out[r].end());
  }
  return out;
}

ImbalanceReport imbalance(const Partition& p, const Mesh& mesh, const DofMap& dofs) {
  ImbalanceReport rep;
  rep.dofs_per_rank.assign(p.n_parts, 0);
  for (int o : dof_owners(p, dofs)) ++rep.dofs_per_rank[o];
  const double mean = static_cast<double>(dofs.n_dofs()) / p.n_parts;
  const Index mx = *std::max_element(rep.dofs_per_rank.begin(), rep.dofs_per_rank.end());
  rep.ratio = mean > 0.0 ? static_cast<double>(mx) / mean : 1.0;
  for (const auto& f : build_facets(mesh))
    if (!f.is_boundary() && p.owner[f.cell0] != p.owner[f.cell1]) ++rep.cross_rank_facets;
  return rep;
}

}  // namespace fsi
