#pragma once

#include <iosfwd>
#include <string>

#include "fsi/mesh.hpp"

namespace fsi {

/// Plain-text mesh format.
///
///   # comments start with '#', blank lines are ignored
///   <dim> <n_nodes> <n_cells>
///   <x> <y> [<z>]                      one line per node
///   <v_0> ... <v_{2^dim-1}> fluid|solid one line per cell, lexicographic vertex order
///   facet <cell> <local_face> <tag>     tag in {inflow, outflow, top, bottom, obstacle, solid_base}
///   circle <cx> <cy> <radius>           optional, 2D snap circle for refinement
///
/// Local face 2a+s is the face where reference coordinate a equals s.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace fsi
