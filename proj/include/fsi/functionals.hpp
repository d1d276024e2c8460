#pragma once

#include <optional>

#include "fsi/assembly.hpp"

namespace fsi {

/// Hydrodynamic force on the immersed body: drag, lift and (3D) the
/// z-component.
struct BodyForce {
  double drag = 0.0;
  double lift = 0.0;
  double side = 0.0;
};

/// Integrates the transformed fluid traction J sigma F^{-T} n over the
/// Obstacle facets and the fluid side of the fluid-solid interface. The
/// sign is that of the force exerted by the fluid on the body.
BodyForce evaluate_drag_lift(const FsiState& state, const Mesh& mesh, const DofMap& dofs,
                             const MaterialParams& params);

/// Reference coordinates of `x` in `cell` (Newton on the multilinear map);
/// nullopt if the point lies outside the cell.
std::optional<Point> locate_in_cell(const Mesh& mesh, Index cell, const Point& x, double tol = 1e-10);

/// Displacement interpolated at a reference-configuration point. Solid cells
/// are searched first. Throws QueryError if no cell contains the point.
Point evaluate_point(const FsiState& state, const Mesh& mesh, const DofMap& dofs, const Point& x);

}  // namespace fsi
