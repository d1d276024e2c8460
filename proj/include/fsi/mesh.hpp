#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fsi/common.hpp"

namespace fsi {

/// Circle used to re-snap curved boundary nodes during refinement (2D only).
struct SnapCircle {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

/// A tagged facet of the outer boundary, addressed by (cell, local face).
/// Local faces follow the tensor-product convention: face 2a+s is the face
/// where reference coordinate a equals s.
struct BoundaryFacet {
  Index cell = 0;
  int face = 0;
  BoundaryTag tag = BoundaryTag::Inflow;
};

/// A facet shared by one Fluid and one Solid cell.
struct InterfaceFacet {
  Index fluid_cell = 0;
  int fluid_face = 0;
  Index solid_cell = 0;
  int solid_face = 0;
};

/// Conforming quadrilateral (2D) or hexahedral (3D) mesh of the reference
/// configuration. Cell vertices are stored in lexicographic tensor-product
/// order: vertex index i has reference coordinate bit a equal to (i >> a) & 1.
class Mesh {
 public:
  Mesh() = default;
  Mesh(int dim, std::vector<Point> nodes, std::vector<Index> cell_vertices,
       std::vector<Subdomain> cell_subdomain, std::vector<BoundaryFacet> boundary);

  int dim() const noexcept { return dim_; }
  int vertices_per_cell() const noexcept { return 1 << dim_; }
  int faces_per_cell() const noexcept { return 2 * dim_; }
  Index n_nodes() const noexcept { return static_cast<Index>(nodes_.size()); }
  Index n_cells() const noexcept { return static_cast<Index>(cell_subdomain_.size()); }

  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const Point& node(Index i) const { return nodes_[i]; }
  std::span<const Index> cell(Index c) const {
    return {cell_vertices_.data() + c * vertices_per_cell(), static_cast<std::size_t>(vertices_per_cell())};
  }
  const std::vector<Index>& cell_vertices() const noexcept { return cell_vertices_; }
  Subdomain subdomain(Index c) const { return cell_subdomain_[c]; }
  const std::vector<Subdomain>& subdomains() const noexcept { return cell_subdomain_; }
  const std::vector<BoundaryFacet>& boundary() const noexcept { return boundary_; }
  const std::vector<InterfaceFacet>& interface_facets() const noexcept { return interface_; }

  const std::optional<SnapCircle>& snap_circle() const noexcept { return snap_; }
  void set_snap_circle(std::optional<SnapCircle> c) { snap_ = c; }

  /// Local vertex indices (into cell(c)) of local face f, in lexicographic order.
  std::vector<int> face_vertices(int face) const;
  /// Cell centroid (vertex average).
  Point centroid(Index c) const;
  /// Cell measure by Gauss quadrature of the multilinear map.
  double cell_measure(Index c) const;
  Index count_cells(Subdomain s) const;

 private:
  void build_interface();

  int dim_ = 2;
  std::vector<Point> nodes_;
  std::vector<Index> cell_vertices_;
  std::vector<Subdomain> cell_subdomain_;
  std::vector<BoundaryFacet> boundary_;
  std::vector<InterfaceFacet> interface_;
  std::optional<SnapCircle> snap_;
};

/// Facet adjacency: every facet of the mesh with its one or two neighbors.
struct FacetInfo {
  Index cell0 = -1;
  int face0 = -1;
  Index cell1 = -1;
  int face1 = -1;
  bool is_boundary() const noexcept { return cell1 < 0; }
};

/// All facets of the mesh (interior and boundary). Throws ConfigError if a
/// facet is shared by more than two cells.
std::vector<FacetInfo> build_facets(const Mesh& mesh);

/// Checks the structural invariants: positive Jacobians at Gauss points,
/// conformity (every facet has at most two cells, every boundary facet is
/// tagged), and interface facets joining exactly one Fluid and one Solid cell.
/// Returns an empty string when valid, otherwise a description of the first
/// violation.
std::string validate_mesh(const Mesh& mesh);

/// Node -> incident cells.
std::vector<std::vector<Index>> node_to_cells(const Mesh& mesh);

inline constexpr int kMaxRefineLevel2d = 5;
inline constexpr int kMaxRefineLevel3d = 3;

/// FSI-2 channel with cylinder and attached elastic beam.
Mesh build_fsi2_mesh(int refine_level);
/// 3D channel (0,1.5)x(0,0.4)x(-0.4,0.4) with an elastic inclusion.
Mesh build_box3d_mesh(int refine_level);
/// Splits every cell into 2^d children; tags and subdomains are inherited.
Mesh refine_uniform(const Mesh& mesh);

/// Single-cell axis-aligned box mesh [lo, hi], all facets tagged `tag`.
Mesh build_single_cell_mesh(int dim, Subdomain sd, BoundaryTag tag = BoundaryTag::Bottom,
                            double size = 1.0);

namespace fsi2 {
inline constexpr double kLength = 2.5;
inline constexpr double kHeight = 0.41;
inline constexpr double kCylinderX = 0.2;
inline constexpr double kCylinderY = 0.2;
inline constexpr double kCylinderRadius = 0.05;
inline constexpr double kBeamThickness = 0.02;
inline constexpr double kBeamTipX = 0.6;
inline constexpr Point kReferencePoint{0.6, 0.2, 0.0};
}  // namespace fsi2

namespace box3d {
inline constexpr double kLength = 1.5;
inline constexpr double kHeight = 0.4;
inline constexpr double kObstacleX0 = 0.4;
inline constexpr double kObstacleX1 = 0.5;
inline constexpr double kObstacleHeight = 0.3;
inline constexpr double kObstacleHalfWidth = 0.2;
inline constexpr std::array<Point, 4> kEvaluationPoints{{
    {0.4, 0.3, 0.0}, {0.4, 0.3, -0.2}, {0.5, 0.3, -0.2}, {0.5, 0.3, 0.0}}};
}  // namespace box3d

}  // namespace fsi
