#include "fsi/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace fsi {

namespace {

bool next_content_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
  throw ConfigError("mesh line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

Mesh read_mesh(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_content_line(in, line, line_no)) fail(line_no, "missing header");
  int dim = 0;
  Index n_nodes = 0, n_cells = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> dim >> n_nodes >> n_cells) || (dim != 2 && dim != 3) || n_nodes <= 0 || n_cells <= 0)
      fail(line_no, "expected header '<dim> <n_nodes> <n_cells>'");
  }
  std::vector<Point> nodes(n_nodes, Point{0, 0, 0});
  for (Index i = 0; i < n_nodes; ++i) {
    if (!next_content_line(in, line, line_no)) fail(line_no, "unexpected end of node list");
    std::istringstream ss(line);
    for (int a = 0; a < dim; ++a)
      if (!(ss >> nodes[i][a])) fail(line_no, "bad node coordinates");
  }
  const int nv = 1 << dim;
  std::vector<Index> cells(n_cells * nv);
  std::vector<Subdomain> sd(n_cells);
  for (Index c = 0; c < n_cells; ++c) {
    if (!next_content_line(in, line, line_no)) fail(line_no, "unexpected end of cell list");
    std::istringstream ss(line);
    for (int v = 0; v < nv; ++v)
      if (!(ss >> cells[c * nv + v]) || cells[c * nv + v] < 0 || cells[c * nv + v] >= n_nodes)
        fail(line_no, "bad cell vertex index");
    std::string tag;
    if (!(ss >> tag)) fail(line_no, "missing subdomain tag");
    try {
      sd[c] = subdomain_from_string(tag);
    } catch (const ConfigError& e) {
      fail(line_no, e.what());
    }
  }
  std::vector<BoundaryFacet> boundary;
  std::optional<SnapCircle> circle;
  while (next_content_line(in, line, line_no)) {
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "facet") {
      BoundaryFacet f;
      std::string tag;
      if (!(ss >> f.cell >> f.face >> tag) || f.cell < 0 || f.cell >= n_cells || f.face < 0 || f.face >= 2 * dim)
        fail(line_no, "expected 'facet <cell> <face> <tag>'");
      try {
        f.tag = boundary_tag_from_string(tag);
      } catch (const ConfigError& e) {
        fail(line_no, e.what());
      }
      boundary.push_back(f);
    } else if (kind == "circle") {
      SnapCircle c;
      if (!(ss >> c.cx >> c.cy >> c.radius) || c.radius <= 0) fail(line_no, "expected 'circle <cx> <cy> <r>'");
      circle = c;
    } else {
      fail(line_no, "unknown record '" + kind + "'");
    }
  }
  Mesh mesh(dim, std::move(nodes), std::move(cells), std::move(sd), std::move(boundary));
  mesh.set_snap_circle(circle);
  return mesh;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << std::setprecision(17);
  out << mesh.dim() << ' ' << mesh.n_nodes() << ' ' << mesh.n_cells() << '\n';
  for (const Point& p : mesh.nodes()) {
    for (int a = 0; a < mesh.dim(); ++a) out << (a ? " " : "") << p[a];
    out << '\n';
  }
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    for (Index v : mesh.cell(c)) out << v << ' ';
    out << to_string(mesh.subdomain(c)) << '\n';
  }
  for (const auto& f : mesh.boundary()) out << "facet " << f.cell << ' ' << f.face << ' ' << to_string(f.tag) << '\n';
  if (const auto& c = mesh.snap_circle()) out << "circle " << c->cx << ' ' << c->cy << ' ' << c->radius << '\n';
}

}  // namespace fsi
