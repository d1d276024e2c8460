#pragma once

#include <span>
#include <vector>

#include "fsi/element.hpp"
#include "fsi/mesh.hpp"

namespace fsi {

enum class Field : std::uint8_t { U, V, P };

/// Row/column class of the 3x3 block system (mesh motion, solid, fluid).
enum class BlockClass : std::uint8_t { Mesh = 0, Solid = 1, Fluid = 2 };

inline constexpr int kNumBlocks = 3;

/// A constrained dof. Inflow dofs take the inflow profile component, all
/// others are homogeneous.
struct DirichletDof {
  Index dof = 0;
  bool inflow = false;
  int component = 0;
  Point x{0, 0, 0};
};

struct DofOptions {
  /// Allow meshes made only of Fluid (or only of Solid) cells; used by
  /// single-cell unit checks. The FSI pipeline requires both.
  bool allow_single_subdomain = false;
};

/// Global numbering of (u, v, p). Kinematic nodes carry d displacement and
/// d velocity dofs, interleaved per node as [u_0..u_{d-1}, v_0..v_{d-1}];
/// pressure dofs follow, cell by cell over Fluid cells.
class DofMap {
 public:
  DofMap(const Mesh& mesh, ElementPair elements, DofOptions options = {});

  int dim() const noexcept { return dim_; }
  const ElementPair& elements() const noexcept { return elements_; }
  Index n_dofs() const noexcept { return n_dofs_; }
  Index n_nodes() const noexcept { return static_cast<Index>(node_coords_.size()); }
  Index n_pressure_dofs() const noexcept { return n_dofs_ - first_pressure_dof(); }
  Index first_pressure_dof() const noexcept { return n_nodes() * 2 * dim_; }
  int nodes_per_cell() const noexcept { return nodes_per_cell_; }
  int pressure_per_cell() const noexcept { return pressure_per_cell_; }

  Index u_dof(Index node, int comp) const noexcept { return node * 2 * dim_ + comp; }
  Index v_dof(Index node, int comp) const noexcept { return node * 2 * dim_ + dim_ + comp; }
  /// First pressure dof of a Fluid cell, -1 for Solid cells.
  Index pressure_dof(Index cell) const { return cell_pressure_[cell]; }

  std::span<const Index> cell_nodes(Index cell) const {
    return {cell_nodes_.data() + cell * nodes_per_cell_, static_cast<std::size_t>(nodes_per_cell_)};
  }
  /// Local-to-global map of a cell: u (node-major, component-minor), then v,
  /// then pressure (Fluid cells only).
  std::vector<Index> cell_dofs(Index cell) const;
  int n_cell_dofs(Index cell) const;

  const Point& node_coord(Index node) const { return node_coords_[node]; }
  bool node_on_interface(Index node) const { return node_interface_[node]; }
  bool node_in_solid(Index node) const { return node_solid_[node]; }

  Field field(Index dof) const { return field_[dof]; }
  BlockClass block_class(Index dof) const { return block_[dof]; }
  const std::vector<BlockClass>& block_classes() const noexcept { return block_; }
  /// Kinematic node of a u/v dof, -1 for pressure.
  Index dof_node(Index dof) const { return dof < first_pressure_dof() ? dof / (2 * dim_) : -1; }
  int dof_component(Index dof) const {
    return dof < first_pressure_dof() ? static_cast<int>(dof % (2 * dim_)) % dim_ : 0;
  }

  const std::vector<DirichletDof>& dirichlet() const noexcept { return dirichlet_; }
  bool is_dirichlet(Index dof) const { return constrained_[dof]; }
  const std::vector<char>& constrained_mask() const noexcept { return constrained_; }
  /// u and v dofs of interface nodes, sorted.
  const std::vector<Index>& interface_dofs() const noexcept { return interface_dofs_; }

  std::array<Index, kNumBlocks> block_sizes() const;

 private:
  int dim_;
  ElementPair elements_;
  int nodes_per_cell_ = 0;
  int pressure_per_cell_ = 0;
  Index n_dofs_ = 0;
  std::vector<Index> cell_nodes_;
  std::vector<Index> cell_pressure_;
  std::vector<Point> node_coords_;
  std::vector<char> node_interface_;
  std::vector<char> node_solid_;
  std::vector<Field> field_;
  std::vector<BlockClass> block_;
  std::vector<DirichletDof> dirichlet_;
  std::vector<char> constrained_;
  std::vector<Index> interface_dofs_;
};

inline DofMap distribute_dofs(const Mesh& mesh, ElementPair elements, DofOptions options = {}) {
  return DofMap(mesh, elements, options);
}

}  // namespace fsi
