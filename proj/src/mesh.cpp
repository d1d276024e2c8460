#include "fsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "fsi/detail/reference_cell.hpp"

namespace fsi {

const char* to_string(Subdomain s) { return s == Subdomain::Fluid ? "fluid" : "solid"; }

const char* to_string(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::Inflow: return "inflow";
    case BoundaryTag::Outflow: return "outflow";
    case BoundaryTag::Top: return "top";
    case BoundaryTag::Bottom: return "bottom";
    case BoundaryTag::Obstacle: return "obstacle";
    case BoundaryTag::SolidBase: return "solid_base";
  }
  return "?";
}

Subdomain subdomain_from_string(const std::string& s) {
  if (s == "fluid") return Subdomain::Fluid;
  if (s == "solid") return Subdomain::Solid;
  throw ConfigError("unknown subdomain '" + s + "'");
}

BoundaryTag boundary_tag_from_string(const std::string& s) {
  for (auto t : {BoundaryTag::Inflow, BoundaryTag::Outflow, BoundaryTag::Top, BoundaryTag::Bottom,
                 BoundaryTag::Obstacle, BoundaryTag::SolidBase})
    if (s == to_string(t)) return t;
  throw ConfigError("unknown boundary tag '" + s + "'");
}

// ---------------------------------------------------------------------------

Mesh::Mesh(int dim, std::vector<Point> nodes, std::vector<Index> cell_vertices,
           std::vector<Subdomain> cell_subdomain, std::vector<BoundaryFacet> boundary)
    : dim_(dim),
      nodes_(std::move(nodes)),
      cell_vertices_(std::move(cell_vertices)),
      cell_subdomain_(std::move(cell_subdomain)),
      boundary_(std::move(boundary)) {
  if (dim_ != 2 && dim_ != 3) throw ConfigError("mesh dimension must be 2 or 3");
  if (cell_vertices_.size() != cell_subdomain_.size() * static_cast<std::size_t>(vertices_per_cell()))
    throw ConfigError("cell vertex table size does not match cell count");
  for (Index v : cell_vertices_)
    if (v < 0 || v >= n_nodes()) throw ConfigError("cell references node out of range");
  std::sort(boundary_.begin(), boundary_.end(), [](const BoundaryFacet& a, const BoundaryFacet& b) {
    return a.cell != b.cell ? a.cell < b.cell : a.face < b.face;
  });
  build_interface();
}

std::vector<int> Mesh::face_vertices(int face) const {
  const int axis = face / 2;
  const int side = face % 2;
  std::vector<int> out;
  for (int i = 0; i < vertices_per_cell(); ++i)
    if (((i >> axis) & 1) == side) out.push_back(i);
  return out;
}

Point Mesh::centroid(Index c) const {
  Point p{0, 0, 0};
  for (Index v : cell(c))
    for (int a = 0; a < 3; ++a) p[a] += nodes_[v][a];
  for (double& x : p) x /= vertices_per_cell();
  return p;
}

namespace {

std::vector<Point> cell_points(const Mesh& mesh, Index c) {
  std::vector<Point> pts;
  for (Index v : mesh.cell(c)) pts.push_back(mesh.node(v));
  return pts;
}

// 2-point Gauss rule per direction is exact for the multilinear determinant.
template <class Fn>
void for_each_gauss2(int dim, Fn&& fn) {
  const double g[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  const int n = 1 << dim;
  for (int k = 0; k < n; ++k) {
    Point xi{g[k & 1], g[(k >> 1) & 1], dim == 3 ? g[(k >> 2) & 1] : 0.0};
    fn(xi, 1.0 / n);
  }
}

}  // namespace

double Mesh::cell_measure(Index c) const {
  const auto pts = cell_points(*this, c);
  double m = 0.0;
  for_each_gauss2(dim_, [&](const Point& xi, double w) { m += w * detail::map_point(dim_, pts, xi).det; });
  return m;
}

Index Mesh::count_cells(Subdomain s) const {
  return std::count(cell_subdomain_.begin(), cell_subdomain_.end(), s);
}

void Mesh::build_interface() {
  interface_.clear();
  if (n_cells() == 0) return;
  for (const FacetInfo& f : build_facets(*this)) {
    if (f.is_boundary()) continue;
    const Subdomain s0 = subdomain(f.cell0);
    const Subdomain s1 = subdomain(f.cell1);
    if (s0 == s1) continue;
    if (s0 == Subdomain::Fluid)
      interface_.push_back({f.cell0, f.face0, f.cell1, f.face1});
    else
      interface_.push_back({f.cell1, f.face1, f.cell0, f.face0});
  }
}

std::vector<FacetInfo> build_facets(const Mesh& mesh) {
  std::map<std::vector<Index>, std::size_t> index;
  std::vector<FacetInfo> facets;
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    const auto verts = mesh.cell(c);
    for (int f = 0; f < mesh.faces_per_cell(); ++f) {
      std::vector<Index> key;
      for (int lv : mesh.face_vertices(f)) key.push_back(verts[lv]);
      std::sort(key.begin(), key.end());
      auto [it, inserted] = index.try_emplace(std::move(key), facets.size());
      if (inserted) {
        facets.push_back({c, f, -1, -1});
      } else {
        FacetInfo& info = facets[it->second];
        if (info.cell1 >= 0) throw ConfigError("facet shared by more than two cells");
        info.cell1 = c;
        info.face1 = f;
      }
    }
  }
  return facets;
}

std::vector<std::vector<Index>> node_to_cells(const Mesh& mesh) {
  std::vector<std::vector<Index>> out(mesh.n_nodes());
  for (Index c = 0; c < mesh.n_cells(); ++c)
    for (Index v : mesh.cell(c)) out[v].push_back(c);
  return out;
}

std::string validate_mesh(const Mesh& mesh) {
  std::ostringstream err;
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    const auto pts = cell_points(mesh, c);
    bool ok = true;
    for_each_gauss2(mesh.dim(), [&](const Point& xi, double) {
      if (detail::map_point(mesh.dim(), pts, xi).det <= 0.0) ok = false;
    });
    if (!ok) {
      err << "cell " << c << " has a non-positive Jacobian";
      return err.str();
    }
  }
  std::vector<FacetInfo> facets;
  try {
    facets = build_facets(mesh);
  } catch (const ConfigError& e) {
    return e.what();
  }
  std::map<std::pair<Index, int>, BoundaryTag> tags;
  for (const auto& b : mesh.boundary()) tags[{b.cell, b.face}] = b.tag;
  for (const auto& f : facets) {
    if (f.is_boundary()) {
      if (!tags.count({f.cell0, f.face0})) {
        err << "untagged boundary facet (cell " << f.cell0 << ", face " << f.face0 << ")";
        return err.str();
      }
    } else if (tags.count({f.cell0, f.face0}) || tags.count({f.cell1, f.face1})) {
      err << "interior facet carries a boundary tag (cell " << f.cell0 << ")";
      return err.str();
    }
  }
  for (const auto& i : mesh.interface_facets()) {
    if (mesh.subdomain(i.fluid_cell) != Subdomain::Fluid || mesh.subdomain(i.solid_cell) != Subdomain::Solid)
      return "interface facet does not join a fluid and a solid cell";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Refinement

namespace {

void snap_to_circle(Point& p, const SnapCircle& c) {
  const double dx = p[0] - c.cx;
  const double dy = p[1] - c.cy;
  const double r = std::hypot(dx, dy);
  if (r == 0.0) return;
  p[0] = c.cx + dx * c.radius / r;
  p[1] = c.cy + dy * c.radius / r;
}

bool is_curved(BoundaryTag t) { return t == BoundaryTag::Obstacle || t == BoundaryTag::SolidBase; }

}  // namespace

Mesh refine_uniform(const Mesh& mesh) {
  const int dim = mesh.dim();
  const int nv = mesh.vertices_per_cell();
  const int n_lattice = detail::lattice_size(dim);

  std::vector<Point> nodes = mesh.nodes();
  std::map<std::vector<Index>, Index> created;
  std::vector<Index> cells;
  cells.reserve(mesh.cell_vertices().size() * nv);
  std::vector<Subdomain> subdomains;
  subdomains.reserve(mesh.n_cells() * nv);

  std::map<std::pair<Index, int>, BoundaryTag> tags;
  for (const auto& b : mesh.boundary()) tags[{b.cell, b.face}] = b.tag;
  std::vector<bool> snapped(nodes.size(), false);

  std::vector<Index> lattice(n_lattice);
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    const auto verts = mesh.cell(c);
    for (int k = 0; k < n_lattice; ++k) {
      const auto idx = detail::lattice_from_linear(dim, k);
      auto key = detail::lattice_key(verts, dim, idx);
      if (key.size() == 1) {
        lattice[k] = key.front();
        continue;
      }
      auto it = created.find(key);
      if (it == created.end()) {
        Point p{0, 0, 0};
        for (Index v : key)
          for (int a = 0; a < 3; ++a) p[a] += nodes[v][a] / static_cast<double>(key.size());
        nodes.push_back(p);
        snapped.push_back(false);
        it = created.emplace(std::move(key), static_cast<Index>(nodes.size() - 1)).first;
      }
      lattice[k] = it->second;
    }
    if (mesh.snap_circle() && dim == 2) {
      for (int f = 0; f < mesh.faces_per_cell(); ++f) {
        auto t = tags.find({c, f});
        if (t == tags.end() || !is_curved(t->second)) continue;
        const int axis = f / 2;
        const int side = f % 2;
        for (int k = 0; k < n_lattice; ++k) {
          const auto idx = detail::lattice_from_linear(dim, k);
          const Index n = lattice[k];
          if (idx[axis] != 2 * side || n < mesh.n_nodes() || snapped[n]) continue;
          snap_to_circle(nodes[n], *mesh.snap_circle());
          snapped[n] = true;
        }
      }
    }
    for (int child = 0; child < nv; ++child) {
      for (int v = 0; v < nv; ++v) {
        int k = 0;
        int stride = 1;
        for (int a = 0; a < dim; ++a) {
          k += (((child >> a) & 1) + ((v >> a) & 1)) * stride;
          stride *= 3;
        }
        cells.push_back(lattice[k]);
      }
      subdomains.push_back(mesh.subdomain(c));
    }
  }

  std::vector<BoundaryFacet> boundary;
  for (const auto& b : mesh.boundary()) {
    const int axis = b.face / 2;
    const int side = b.face % 2;
    for (int child = 0; child < nv; ++child)
      if (((child >> axis) & 1) == side) boundary.push_back({b.cell * nv + child, b.face, b.tag});
  }
  Mesh out(dim, std::move(nodes), std::move(cells), std::move(subdomains), std::move(boundary));
  out.set_snap_circle(mesh.snap_circle());
  return out;
}

// ---------------------------------------------------------------------------
// Block-structured generators

namespace {

/// Boundary curve of a macro block, parameterized on [0, 1].
using Curve = std::function<Point(double)>;

Curve segment(Point a, Point b) {
  return [a, b](double s) { return Point{a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]), 0.0}; };
}

Curve arc(double cx, double cy, double r, double a0, double a1) {
  return [=](double s) {
    const double a = a0 + s * (a1 - a0);
    return Point{cx + r * std::cos(a), cy + r * std::sin(a), 0.0};
  };
}

/// Coons patch with edges bottom (t=0), top (t=1), left (s=0), right (s=1).
struct MacroBlock {
  Curve bottom, top, left, right;
  int ns = 1;
  int nt = 1;
  Subdomain subdomain = Subdomain::Fluid;

  Point at(double s, double t) const {
    const Point b = bottom(s), tp = top(s), l = left(t), r = right(t);
    const Point p00 = bottom(0), p10 = bottom(1), p01 = top(0), p11 = top(1);
    Point p{0, 0, 0};
    for (int a = 0; a < 2; ++a)
      p[a] = (1 - t) * b[a] + t * tp[a] + (1 - s) * l[a] + s * r[a] -
             ((1 - s) * (1 - t) * p00[a] + s * (1 - t) * p10[a] + (1 - s) * t * p01[a] + s * t * p11[a]);
    return p;
  }
};

MacroBlock rectangle(double x0, double x1, double y0, double y1, int nx, int ny, Subdomain sd) {
  MacroBlock b;
  b.bottom = segment({x0, y0, 0}, {x1, y0, 0});
  b.top = segment({x0, y1, 0}, {x1, y1, 0});
  b.left = segment({x0, y0, 0}, {x0, y1, 0});
  b.right = segment({x1, y0, 0}, {x1, y1, 0});
  b.ns = nx;
  b.nt = ny;
  b.subdomain = sd;
  return b;
}

// s runs radially outward from the arc to the straight edge q0-q1, t runs
// counter-clockwise from angle a0 to a1.
MacroBlock ring_sector(double a0, double a1, Point q0, Point q1, int nr, int nt, Subdomain sd) {
  using namespace fsi2;
  MacroBlock b;
  const Point p0{kCylinderX + kCylinderRadius * std::cos(a0), kCylinderY + kCylinderRadius * std::sin(a0), 0};
  const Point p1{kCylinderX + kCylinderRadius * std::cos(a1), kCylinderY + kCylinderRadius * std::sin(a1), 0};
  b.bottom = segment(p0, q0);
  b.top = segment(p1, q1);
  b.left = arc(kCylinderX, kCylinderY, kCylinderRadius, a0, a1);
  b.right = segment(q0, q1);
  b.ns = nr;
  b.nt = nt;
  b.subdomain = sd;
  return b;
}

/// Merges block lattices into one mesh, identifying coincident nodes.
class BlockAssembler {
 public:
  void add(const MacroBlock& b) {
    std::vector<Index> ids((b.ns + 1) * (b.nt + 1));
    for (int j = 0; j <= b.nt; ++j)
      for (int i = 0; i <= b.ns; ++i)
        ids[j * (b.ns + 1) + i] = node_id(b.at(static_cast<double>(i) / b.ns, static_cast<double>(j) / b.nt));
    for (int j = 0; j < b.nt; ++j)
      for (int i = 0; i < b.ns; ++i) {
        cells.push_back(ids[j * (b.ns + 1) + i]);
        cells.push_back(ids[j * (b.ns + 1) + i + 1]);
        cells.push_back(ids[(j + 1) * (b.ns + 1) + i]);
        cells.push_back(ids[(j + 1) * (b.ns + 1) + i + 1]);
        subdomains.push_back(b.subdomain);
      }
  }

  std::vector<Point> nodes;
  std::vector<Index> cells;
  std::vector<Subdomain> subdomains;

 private:
  static constexpr double kTol = 1e-10;
  static constexpr double kBin = 1e-7;

  Index node_id(const Point& p) {
    const long long bx = std::llround(p[0] / kBin);
    const long long by = std::llround(p[1] / kBin);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = bins_.find(key(bx + dx, by + dy));
        if (it == bins_.end()) continue;
        for (Index n : it->second)
          if (std::abs(nodes[n][0] - p[0]) < kTol && std::abs(nodes[n][1] - p[1]) < kTol) return n;
      }
    nodes.push_back(p);
    bins_[key(bx, by)].push_back(static_cast<Index>(nodes.size() - 1));
    return static_cast<Index>(nodes.size() - 1);
  }
  static long long key(long long x, long long y) { return x * 1000003LL + y; }

  std::unordered_map<long long, std::vector<Index>> bins_;
};

std::vector<BoundaryFacet> tag_boundary(const Mesh& untagged, const std::function<BoundaryTag(Index, const Point&)>& rule) {
  std::vector<BoundaryFacet> out;
  for (const FacetInfo& f : build_facets(untagged)) {
    if (!f.is_boundary()) continue;
    Point mid{0, 0, 0};
    const auto lv = untagged.face_vertices(f.face0);
    for (int v : lv)
      for (int a = 0; a < 3; ++a) mid[a] += untagged.node(untagged.cell(f.cell0)[v])[a] / lv.size();
    out.push_back({f.cell0, f.face0, rule(f.cell0, mid)});
  }
  return out;
}

void check_level(int level, int max_level) {
  if (level < 0) throw ConfigError("refine level must be non-negative");
  if (level > max_level)
    throw ResourceError("refine level " + std::to_string(level) + " exceeds the supported maximum " +
                        std::to_string(max_level));
}

}  // namespace

Mesh build_fsi2_mesh(int refine_level) {
  check_level(refine_level, kMaxRefineLevel2d);
  using namespace fsi2;
  constexpr double pi = std::numbers::pi;
  const double beam_half = kBeamThickness / 2;
  const double attach = std::asin(beam_half / kCylinderRadius);
  const double y_lo = kCylinderY - beam_half;
  const double y_hi = kCylinderY + beam_half;

  // Grid lines of the channel outside the box [0.1,0.3]^2 around the cylinder.
  const std::array<double, 5> xs{0.0, 0.1, 0.3, kBeamTipX, kLength};
  const std::array<int, 4> nx{2, 4, 6, 19};
  const std::array<double, 6> ys{0.0, 0.1, y_lo, y_hi, 0.3, kHeight};
  const std::array<int, 5> ny{2, 2, 1, 2, 2};
  const int nr = 2;

  BlockAssembler ba;
  for (int ix = 0; ix < 4; ++ix)
    for (int iy = 0; iy < 5; ++iy) {
      if (ix == 1 && iy >= 1 && iy <= 3) continue;
      const Subdomain sd = (ix == 2 && iy == 2) ? Subdomain::Solid : Subdomain::Fluid;
      ba.add(rectangle(xs[ix], xs[ix + 1], ys[iy], ys[iy + 1], nx[ix], ny[iy], sd));
    }

  const double x0 = xs[1], x1 = xs[2], y0 = ys[1], y1 = ys[4];
  const auto F = Subdomain::Fluid;
  ba.add(ring_sector(-pi / 4, -attach, {x1, y0, 0}, {x1, y_lo, 0}, nr, ny[1], F));
  ba.add(ring_sector(-attach, attach, {x1, y_lo, 0}, {x1, y_hi, 0}, nr, ny[2], Subdomain::Solid));
  ba.add(ring_sector(attach, pi / 4, {x1, y_hi, 0}, {x1, y1, 0}, nr, ny[3], F));
  ba.add(ring_sector(pi / 4, 3 * pi / 4, {x1, y1, 0}, {x0, y1, 0}, nr, nx[1], F));
  ba.add(ring_sector(3 * pi / 4, pi - attach, {x0, y1, 0}, {x0, y_hi, 0}, nr, ny[3], F));
  ba.add(ring_sector(pi - attach, pi + attach, {x0, y_hi, 0}, {x0, y_lo, 0}, nr, ny[2], F));
  ba.add(ring_sector(pi + attach, 5 * pi / 4, {x0, y_lo, 0}, {x0, y0, 0}, nr, ny[1], F));
  ba.add(ring_sector(5 * pi / 4, 7 * pi / 4, {x0, y0, 0}, {x1, y0, 0}, nr, nx[1], F));

  Mesh untagged(2, ba.nodes, ba.cells, ba.subdomains, {});
  constexpr double eps = 1e-9;
  auto rule = [&](Index c, const Point& m) {
    if (std::abs(m[0]) < eps) return BoundaryTag::Inflow;
    if (std::abs(m[0] - kLength) < eps) return BoundaryTag::Outflow;
    if (std::abs(m[1]) < eps) return BoundaryTag::Bottom;
    if (std::abs(m[1] - kHeight) < eps) return BoundaryTag::Top;
    const double r = std::hypot(m[0] - kCylinderX, m[1] - kCylinderY);
    if (r < kCylinderRadius + eps && r > 0.5 * kCylinderRadius)
      return untagged.subdomain(c) == Subdomain::Solid ? BoundaryTag::SolidBase : BoundaryTag::Obstacle;
    throw Error("FSI-2 generator produced an unclassifiable boundary facet");
  };
  auto boundary = tag_boundary(untagged, rule);
  Mesh mesh(2, ba.nodes, ba.cells, ba.subdomains, std::move(boundary));
  mesh.set_snap_circle(SnapCircle{kCylinderX, kCylinderY, kCylinderRadius});
  for (int l = 0; l < refine_level; ++l) mesh = refine_uniform(mesh);
  return mesh;
}

Mesh build_box3d_mesh(int refine_level) {
  check_level(refine_level, kMaxRefineLevel3d);
  using namespace box3d;
  const std::vector<double> xs{0.0, 0.2, kObstacleX0, kObstacleX1, 0.7, 0.9, 1.1, 1.3, kLength};
  const std::vector<double> ys{0.0, 0.15, kObstacleHeight, kHeight};
  const std::vector<double> zs{-kHeight, -kObstacleHalfWidth, 0.0, kObstacleHalfWidth, kHeight};
  const Index nx = xs.size(), ny = ys.size(), nz = zs.size();

  std::vector<Point> nodes;
  for (Index k = 0; k < nz; ++k)
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) nodes.push_back({xs[i], ys[j], zs[k]});
  auto id = [&](Index i, Index j, Index k) { return (k * ny + j) * nx + i; };

  std::vector<Index> cells;
  std::vector<Subdomain> sd;
  for (Index k = 0; k + 1 < nz; ++k)
    for (Index j = 0; j + 1 < ny; ++j)
      for (Index i = 0; i + 1 < nx; ++i) {
        for (int v = 0; v < 8; ++v) cells.push_back(id(i + (v & 1), j + ((v >> 1) & 1), k + ((v >> 2) & 1)));
        const double cx = 0.5 * (xs[i] + xs[i + 1]);
        const double cy = 0.5 * (ys[j] + ys[j + 1]);
        const double cz = 0.5 * (zs[k] + zs[k + 1]);
        const bool solid = cx > kObstacleX0 && cx < kObstacleX1 && cy < kObstacleHeight && std::abs(cz) < kObstacleHalfWidth;
        sd.push_back(solid ? Subdomain::Solid : Subdomain::Fluid);
      }

  Mesh untagged(3, nodes, cells, sd, {});
  constexpr double eps = 1e-9;
  auto rule = [&](Index c, const Point& m) {
    if (std::abs(m[0]) < eps) return BoundaryTag::Inflow;
    if (std::abs(m[0] - kLength) < eps) return BoundaryTag::Outflow;
    if (std::abs(m[1]) < eps)
      return untagged.subdomain(c) == Subdomain::Solid ? BoundaryTag::SolidBase : BoundaryTag::Bottom;
    if (std::abs(m[1] - kHeight) < eps) return BoundaryTag::Top;
    if (std::abs(m[2] + kHeight) < eps) return BoundaryTag::Bottom;
    if (std::abs(m[2] - kHeight) < eps) return BoundaryTag::Top;
    throw Error("box3d generator produced an unclassifiable boundary facet");
  };
  auto boundary = tag_boundary(untagged, rule);
  Mesh mesh(3, std::move(nodes), std::move(cells), std::move(sd), std::move(boundary));
  for (int l = 0; l < refine_level; ++l) mesh = refine_uniform(mesh);
  return mesh;
}

Mesh build_single_cell_mesh(int dim, Subdomain sd, BoundaryTag tag, double size) {
  std::vector<Point> nodes;
  for (int v = 0; v < (1 << dim); ++v)
    nodes.push_back({size * (v & 1), size * ((v >> 1) & 1), dim == 3 ? size * ((v >> 2) & 1) : 0.0});
  std::vector<Index> cell(1 << dim);
  for (int v = 0; v < (1 << dim); ++v) cell[v] = v;
  std::vector<BoundaryFacet> boundary;
  for (int f = 0; f < 2 * dim; ++f) boundary.push_back({0, f, tag});
  return Mesh(dim, std::move(nodes), std::move(cell), {sd}, std::move(boundary));
}

}  // namespace fsi
