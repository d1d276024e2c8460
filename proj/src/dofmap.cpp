#include "fsi/dofmap.hpp"

#include <algorithm>
#include <map>

namespace fsi {

DofMap::DofMap(const Mesh& mesh, ElementPair elements, DofOptions options)
    : dim_(mesh.dim()), elements_(elements) {
  elements_.validate();
  const Index n_fluid = mesh.count_cells(Subdomain::Fluid);
  const Index n_solid = mesh.count_cells(Subdomain::Solid);
  if (!options.allow_single_subdomain && (n_fluid == 0 || n_solid == 0))
    throw ConfigError("FSI dof layout needs both Fluid and Solid cells");
  if (mesh.n_cells() == 0) throw ConfigError("empty mesh");

  const LagrangeElement fe = elements_.kinematic(dim_);
  const PressureElement pe = elements_.pressure(dim_);
  nodes_per_cell_ = fe.n_dofs();
  pressure_per_cell_ = pe.n_dofs();

  // Kinematic nodes: mesh vertices first, then higher-order lattice points.
  node_coords_ = mesh.nodes();
  std::map<std::vector<Index>, Index> extra;
  cell_nodes_.resize(mesh.n_cells() * nodes_per_cell_);
  std::vector<Point> verts(mesh.vertices_per_cell());
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    const auto cv = mesh.cell(c);
    for (int v = 0; v < mesh.vertices_per_cell(); ++v) verts[v] = mesh.node(cv[v]);
    for (int i = 0; i < nodes_per_cell_; ++i) {
      auto key = detail::lattice_key(cv, dim_, fe.lattice_index(i));
      Index id;
      if (key.size() == 1) {
        id = key.front();
      } else {
        auto [it, inserted] = extra.try_emplace(std::move(key), static_cast<Index>(node_coords_.size()));
        if (inserted) node_coords_.push_back(detail::map_point(dim_, verts, fe.support_point(i)).x);
        id = it->second;
      }
      cell_nodes_[c * nodes_per_cell_ + i] = id;
    }
  }

  // Vertices of the mesh that no cell uses would be dangling dofs.
  std::vector<char> used(n_nodes(), 0);
  for (Index n : cell_nodes_) used[n] = 1;
  if (std::find(used.begin(), used.end(), 0) != used.end())
    throw ConfigError("mesh contains nodes not referenced by any cell");

  std::vector<char> in_fluid(n_nodes(), 0);
  node_solid_.assign(n_nodes(), 0);
  for (Index c = 0; c < mesh.n_cells(); ++c)
    for (Index n : cell_nodes(c)) (mesh.subdomain(c) == Subdomain::Solid ? node_solid_ : in_fluid)[n] = 1;
  node_interface_.resize(n_nodes());
  for (Index n = 0; n < n_nodes(); ++n) node_interface_[n] = node_solid_[n] && in_fluid[n];

  cell_pressure_.assign(mesh.n_cells(), -1);
  Index next = first_pressure_dof();
  for (Index c = 0; c < mesh.n_cells(); ++c)
    if (mesh.subdomain(c) == Subdomain::Fluid) {
      cell_pressure_[c] = next;
      next += pressure_per_cell_;
    }
  n_dofs_ = next;

  field_.resize(n_dofs_);
  block_.resize(n_dofs_);
  for (Index n = 0; n < n_nodes(); ++n)
    for (int a = 0; a < dim_; ++a) {
      field_[u_dof(n, a)] = Field::U;
      field_[v_dof(n, a)] = Field::V;
      block_[u_dof(n, a)] = node_solid_[n] ? BlockClass::Solid : BlockClass::Mesh;
      block_[v_dof(n, a)] = node_solid_[n] ? BlockClass::Solid : BlockClass::Fluid;
      if (node_interface_[n]) {
        interface_dofs_.push_back(u_dof(n, a));
        interface_dofs_.push_back(v_dof(n, a));
      }
    }
  std::sort(interface_dofs_.begin(), interface_dofs_.end());
  for (Index d = first_pressure_dof(); d < n_dofs_; ++d) {
    field_[d] = Field::P;
    block_[d] = BlockClass::Fluid;
  }

  // Dirichlet sets. 0 = free, 1 = inflow profile, 2 = homogeneous (wins).
  std::vector<char> kind(n_dofs_, 0);
  auto mark = [&](Index dof, char k) { kind[dof] = std::max(kind[dof], k); };
  for (const BoundaryFacet& bf : mesh.boundary()) {
    const int axis = bf.face / 2;
    const int side = bf.face % 2;
    for (int i = 0; i < nodes_per_cell_; ++i) {
      if (fe.lattice_index(i)[axis] != 2 * side) continue;
      const Index n = cell_nodes_[bf.cell * nodes_per_cell_ + i];
      for (int a = 0; a < dim_; ++a) {
        mark(u_dof(n, a), 2);
        switch (bf.tag) {
          case BoundaryTag::Inflow: mark(v_dof(n, a), 1); break;
          case BoundaryTag::Outflow: break;
          default: mark(v_dof(n, a), 2); break;
        }
      }
    }
  }
  constrained_.assign(n_dofs_, 0);
  for (Index d = 0; d < n_dofs_; ++d) {
    if (!kind[d]) continue;
    constrained_[d] = 1;
    const Index n = dof_node(d);
    dirichlet_.push_back({d, kind[d] == 1, dof_component(d), node_coords_[n]});
  }
}

std::vector<Index> DofMap::cell_dofs(Index cell) const {
  std::vector<Index> out;
  out.reserve(n_cell_dofs(cell));
  const auto nodes = cell_nodes(cell);
  for (Index n : nodes)
    for (int a = 0; a < dim_; ++a) out.push_back(u_dof(n, a));
  for (Index n : nodes)
    for (int a = 0; a < dim_; ++a) out.push_back(v_dof(n, a));
  if (cell_pressure_[cell] >= 0)
    for (int q = 0; q < pressure_per_cell_; ++q) out.push_back(cell_pressure_[cell] + q);
  return out;
}

int DofMap::n_cell_dofs(Index cell) const {
  return 2 * dim_ * nodes_per_cell_ + (cell_pressure_[cell] >= 0 ? pressure_per_cell_ : 0);
}

std::array<Index, kNumBlocks> DofMap::block_sizes() const {
  std::array<Index, kNumBlocks> s{0, 0, 0};
  for (BlockClass b : block_) ++s[static_cast<int>(b)];
  return s;
}

}  // namespace fsi
