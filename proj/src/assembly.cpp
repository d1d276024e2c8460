#include "fsi/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "fsi/detail/cell_eval.hpp"
#include "fsi/parallel.hpp"

namespace fsi {

namespace {

using detail::FieldValues;
using detail::PointGeometry;
using detail::ShapeTable;

struct Tables {
  ShapeTable cell;
  std::vector<ShapeTable> faces;
};

Tables make_tables(const DofMap& dofs) {
  const int dim = dofs.dim();
  const auto& el = dofs.elements();
  const auto fe = el.kinematic(dim);
  const auto pe = el.pressure(dim);
  Tables t;
  const auto rule = el.cell_quadrature(dim);
  t.cell = ShapeTable(dim, fe, pe, rule.points, rule.weights);
  for (int f = 0; f < 2 * dim; ++f) {
    const auto fr = el.face_quadrature(dim, f);
    t.faces.emplace_back(dim, fe, pe, fr.points, fr.weights);
  }
  return t;
}

/// Local element vector/matrix of one cell in cell_dofs order.
struct LocalSystem {
  int n = 0;
  std::vector<double> r;
  std::vector<double> k;  ///< row-major n x n
  bool want_r = false;
  bool want_k = false;

  void reset(int size, bool res, bool jac) {
    n = size;
    want_r = res;
    want_k = jac;
    if (res) r.assign(n, 0.0);
    if (jac) k.assign(static_cast<std::size_t>(n) * n, 0.0);
  }
  double& at(int row, int col) { return k[static_cast<std::size_t>(row) * n + col]; }
};

template <int Dim>
struct CellKernel {
  const MaterialParams& mp;
  ThetaStep step;
  const ShapeTable& tab;
  int nk;
  int uoff = 0;
  int voff;
  int poff;

  CellKernel(const MaterialParams& p, ThetaStep s, const ShapeTable& t)
      : mp(p), step(s), tab(t), nk(t.n_kin), voff(t.n_kin * Dim), poff(2 * t.n_kin * Dim) {}

  // Adds W (a N_i + B g_i) to the v rows of column `col` (or the residual).
  void add_v_rows(LocalSystem& ls, int col, int q, const PointGeometry<Dim>& g, double w, const Vec<Dim>& a,
                  const Tensor<Dim>& b) const {
    for (int i = 0; i < nk; ++i) {
      const Vec<Dim> val = w * (a * tab.n[q * nk + i] + b * g.grad[i]);
      for (int r = 0; r < Dim; ++r) {
        if (col < 0)
          ls.r[voff + i * Dim + r] += val[r];
        else
          ls.at(voff + i * Dim + r, col) += val[r];
      }
    }
  }

  void fluid_point(LocalSystem& ls, Index cell, int q, const PointGeometry<Dim>& g, const FieldValues<Dim>& f,
                   const FieldValues<Dim>& f0, const std::vector<char>& iface) const {
    const double w = tab.weights[q] * g.det;
    const double dt = step.dt;
    const double th = step.theta;
    const double rho = mp.rho_f;
    const double rn = mp.rho_f * mp.nu_f;
    const auto k = deformation_state<Dim>(f.grad_u, cell);
    const auto k0 = deformation_state<Dim>(f0.grad_u, cell);
    const Tensor<Dim> fi = k.F_inv;
    const Tensor<Dim> fit = fi.transpose();
    const Tensor<Dim> gf = f.grad_v * fi;
    const double jt = th * k.J + (1.0 - th) * k0.J;
    const Vec<Dim> wv = f.u - f0.u;
    const Vec<Dim> dv = f.v - f0.v;
    const Tensor<Dim> sv = rn * (gf + gf.transpose());
    const int np = tab.n_p;

    if (ls.want_r) {
      const Tensor<Dim> gf0 = f0.grad_v * k0.F_inv;
      const Tensor<Dim> sv0 = rn * (gf0 + gf0.transpose());
      const Vec<Dim> rv = rho * (jt * dv - k.J * gf * wv + dt * th * k.J * gf * f.v) +
                          dt * (1.0 - th) * rho * k0.J * gf0 * f0.v;
      const Tensor<Dim> pv = dt * th * k.J * sv * fit + dt * (1.0 - th) * k0.J * sv0 * k0.F_inv.transpose() -
                             dt * f.p * k.J * fit;
      const double rp = k.J * gf.trace();
      const Tensor<Dim> pu = f.grad_u / k.J;
      add_v_rows(ls, -1, q, g, w, rv, pv);
      for (int i = 0; i < nk; ++i) {
        if (iface[i]) continue;
        const Vec<Dim> val = w * (pu * g.grad[i]);
        for (int r = 0; r < Dim; ++r) ls.r[uoff + i * Dim + r] += val[r];
      }
      for (int j = 0; j < np; ++j) ls.r[poff + j] += w * rp * tab.p[q * np + j];
    }
    if (!ls.want_k) return;

    const double trgf = gf.trace();
    for (int j = 0; j < nk; ++j) {
      const double nj = tab.n[q * nk + j];
      const Vec<Dim>& gj = g.grad[j];
      const Vec<Dim> fitg = fit * gj;  // (g_j^T F^{-1})^T
      for (int c = 0; c < Dim; ++c) {
        Vec<Dim> psi = Vec<Dim>::Zero();
        psi[c] = nj;
        // Trial u: dH = e_c g_j^T.
        {
          const int col = uoff + j * Dim + c;
          Tensor<Dim> dh = Tensor<Dim>::Zero();
          dh.row(c) = gj.transpose();
          const double dj = k.J * fi.col(c).dot(gj);
          const Tensor<Dim> dfi = -fi.col(c) * fitg.transpose();
          const Tensor<Dim> dfit = dfi.transpose();
          const Tensor<Dim> dgf = f.grad_v * dfi;
          const Vec<Dim> drv = rho * (th * dj * dv - dj * gf * wv - k.J * dgf * wv - k.J * gf * psi +
                                      dt * th * (dj * gf * f.v + k.J * dgf * f.v));
          const Tensor<Dim> dsv = rn * (dgf + dgf.transpose());
          const Tensor<Dim> dpv = dt * th * (dj * sv * fit + k.J * dsv * fit + k.J * sv * dfit) -
                                  dt * f.p * (dj * fit + k.J * dfit);
          const double drp = dj * trgf + k.J * dgf.trace();
          const Tensor<Dim> dpu = dh / k.J - dj / (k.J * k.J) * f.grad_u;
          add_v_rows(ls, col, q, g, w, drv, dpv);
          for (int i = 0; i < nk; ++i) {
            if (iface[i]) continue;
            const Vec<Dim> val = w * (dpu * g.grad[i]);
            for (int r = 0; r < Dim; ++r) ls.at(uoff + i * Dim + r, col) += val[r];
          }
          for (int m = 0; m < np; ++m) ls.at(poff + m, col) += w * drp * tab.p[q * np + m];
        }
        // Trial v: dG = e_c g_j^T, dGf = e_c (F^{-T} g_j)^T.
        {
          const int col = voff + j * Dim + c;
          Tensor<Dim> dgf = Tensor<Dim>::Zero();
          dgf.row(c) = fitg.transpose();
          const Vec<Dim> drv = rho * (jt * psi - k.J * dgf * wv + dt * th * k.J * (dgf * f.v + gf * psi));
          const Tensor<Dim> dpv = dt * th * k.J * rn * (dgf + dgf.transpose()) * fit;
          const double drp = k.J * fitg[c];
          add_v_rows(ls, col, q, g, w, drv, dpv);
          for (int m = 0; m < np; ++m) ls.at(poff + m, col) += w * drp * tab.p[q * np + m];
        }
      }
    }
    for (int j = 0; j < np; ++j) {
      const Tensor<Dim> dpv = -dt * tab.p[q * np + j] * k.J * fit;
      add_v_rows(ls, poff + j, q, g, w, Vec<Dim>::Zero(), dpv);
    }
  }

  void solid_point(LocalSystem& ls, Index cell, int q, const PointGeometry<Dim>& g, const FieldValues<Dim>& f,
                   const FieldValues<Dim>& f0) const {
    const double w = tab.weights[q] * g.det;
    const double dt = step.dt;
    const double th = step.theta;
    const auto k = deformation_state<Dim>(f.grad_u, cell);
    const Tensor<Dim> s = stvk_stress<Dim>(k.E, mp);
    if (ls.want_r) {
      const auto k0 = deformation_state<Dim>(f0.grad_u, cell);
      const Tensor<Dim> s0 = stvk_stress<Dim>(k0.E, mp);
      const Vec<Dim> rv = mp.rho_s * (f.v - f0.v);
      const Tensor<Dim> pv = dt * th * k.F * s + dt * (1.0 - th) * k0.F * s0;
      const Vec<Dim> ru = (f.u - f0.u) - dt * th * f.v - dt * (1.0 - th) * f0.v;
      add_v_rows(ls, -1, q, g, w, rv, pv);
      for (int i = 0; i < nk; ++i) {
        const double ni = tab.n[q * nk + i];
        for (int r = 0; r < Dim; ++r) ls.r[uoff + i * Dim + r] += w * ru[r] * ni;
      }
    }
    if (!ls.want_k) return;
    for (int j = 0; j < nk; ++j) {
      const double nj = tab.n[q * nk + j];
      const Vec<Dim>& gj = g.grad[j];
      for (int c = 0; c < Dim; ++c) {
        Tensor<Dim> dh = Tensor<Dim>::Zero();
        dh.row(c) = gj.transpose();
        const Tensor<Dim> de = 0.5 * (dh.transpose() * k.F + k.F.transpose() * dh);
        const Tensor<Dim> ds = stvk_stress<Dim>(de, mp);
        const Tensor<Dim> dpv = dt * th * (dh * s + k.F * ds);
        const int ucol = uoff + j * Dim + c;
        const int vcol = voff + j * Dim + c;
        add_v_rows(ls, ucol, q, g, w, Vec<Dim>::Zero(), dpv);
        for (int i = 0; i < nk; ++i) {
          const double ni = tab.n[q * nk + i];
          ls.at(voff + i * Dim + c, vcol) += w * mp.rho_s * nj * ni;
          ls.at(uoff + i * Dim + c, ucol) += w * nj * ni;
          ls.at(uoff + i * Dim + c, vcol) -= w * dt * th * nj * ni;
        }
      }
    }
  }

  // Do-nothing correction on an Outflow facet of a Fluid cell.
  void outflow_point(LocalSystem& ls, Index cell, int face, int q, const ShapeTable& ft,
                     const PointGeometry<Dim>& g, const FieldValues<Dim>& f, const FieldValues<Dim>& f0) const {
    const auto [nrm, ds] = g.face_normal(face);
    const double w = ft.weights[q] * ds;
    const double dt = step.dt;
    const double th = step.theta;
    const double rn = mp.rho_f * mp.nu_f;
    const auto k = deformation_state<Dim>(f.grad_u, cell);
    const Tensor<Dim> fit = k.F_inv.transpose();
    const Tensor<Dim> gf = f.grad_v * k.F_inv;
    auto add = [&](int col, const Vec<Dim>& b) {
      for (int i = 0; i < nk; ++i) {
        const Vec<Dim> val = w * b * ft.n[q * nk + i];
        for (int r = 0; r < Dim; ++r) {
          if (col < 0)
            ls.r[voff + i * Dim + r] += val[r];
          else
            ls.at(voff + i * Dim + r, col) += val[r];
        }
      }
    };
    if (ls.want_r) {
      const auto k0 = deformation_state<Dim>(f0.grad_u, cell);
      const Tensor<Dim> gf0 = f0.grad_v * k0.F_inv;
      const Vec<Dim> bv = -rn * (dt * th * k.J * gf.transpose() * fit * nrm +
                                 dt * (1.0 - th) * k0.J * gf0.transpose() * k0.F_inv.transpose() * nrm);
      add(-1, bv);
    }
    if (!ls.want_k) return;
    const Vec<Dim> fitn = fit * nrm;
    for (int j = 0; j < nk; ++j) {
      const Vec<Dim>& gj = g.grad[j];
      const Vec<Dim> fitg = fit * gj;
      for (int c = 0; c < Dim; ++c) {
        const double dj = k.J * k.F_inv.col(c).dot(gj);
        const Tensor<Dim> dfi = -k.F_inv.col(c) * fitg.transpose();
        const Tensor<Dim> dgf = f.grad_v * dfi;
        const Vec<Dim> dbu = -rn * dt * th *
                             (dj * gf.transpose() * fitn + k.J * dgf.transpose() * fitn +
                              k.J * gf.transpose() * dfi.transpose() * nrm);
        add(uoff + j * Dim + c, dbu);
        Tensor<Dim> dgv = Tensor<Dim>::Zero();
        dgv.row(c) = fitg.transpose();
        const Vec<Dim> dbv = -rn * dt * th * k.J * dgv.transpose() * fitn;
        add(voff + j * Dim + c, dbv);
      }
    }
  }
};

}  // namespace

FsiAssembler::FsiAssembler(const Mesh& mesh, const DofMap& dofs, MaterialParams params, AssemblyOptions options)
    : mesh_(&mesh), dofs_(&dofs), params_(params), options_(std::move(options)) {
  params_.validate();
  if (mesh.dim() != dofs.dim()) throw ConfigError("mesh and dof map dimensions differ");
  set_threads(options_.n_threads);
  cell_outflow_faces_.assign(mesh.n_cells(), {});
  for (const auto& b : mesh.boundary())
    if (b.tag == BoundaryTag::Outflow && mesh.subdomain(b.cell) == Subdomain::Fluid)
      cell_outflow_faces_[b.cell].push_back(b.face);
  build_pattern();
}

void FsiAssembler::set_threads(int n) {
  if (n < 1) throw ConfigError("thread count must be at least 1");
  options_.n_threads = n;
}

void FsiAssembler::build_pattern() {
  const DofMap& d = *dofs_;
  const Mesh& m = *mesh_;
  const int dim = d.dim();
  const Index n = d.n_dofs();
  std::vector<std::vector<Index>> rows(n);
  auto add_node_cols = [&](std::vector<Index>& row, Index cell, bool u, bool v) {
    for (Index nd : d.cell_nodes(cell))
      for (int c = 0; c < dim; ++c) {
        if (u) row.push_back(d.u_dof(nd, c));
        if (v) row.push_back(d.v_dof(nd, c));
      }
  };
  for (Index cell = 0; cell < m.n_cells(); ++cell) {
    const bool fluid = m.subdomain(cell) == Subdomain::Fluid;
    for (Index nd : d.cell_nodes(cell)) {
      for (int c = 0; c < dim; ++c) {
        auto& urow = rows[d.u_dof(nd, c)];
        auto& vrow = rows[d.v_dof(nd, c)];
        if (fluid) {
          if (!d.node_on_interface(nd)) add_node_cols(urow, cell, true, false);
          add_node_cols(vrow, cell, true, true);
          for (int j = 0; j < d.pressure_per_cell(); ++j) vrow.push_back(d.pressure_dof(cell) + j);
        } else {
          add_node_cols(urow, cell, true, true);
          add_node_cols(vrow, cell, true, true);
        }
      }
    }
    if (fluid)
      for (int j = 0; j < d.pressure_per_cell(); ++j) add_node_cols(rows[d.pressure_dof(cell) + j], cell, true, true);
  }
  std::vector<Index> ptr(n + 1, 0);
  std::vector<Index> cols;
  for (Index i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    cols.insert(cols.end(), r.begin(), r.end());
    ptr[i + 1] = static_cast<Index>(cols.size());
    std::vector<Index>().swap(r);
  }
  std::vector<double> vals(cols.size(), 0.0);
  pattern_ = SparseMatrix(n, n, std::move(ptr), std::move(cols), std::move(vals));
}

std::vector<std::vector<Index>> FsiAssembler::worker_cells() const {
  const Index nc = mesh_->n_cells();
  std::vector<std::vector<Index>> out;
  if (!options_.cell_worker.empty()) {
    if (static_cast<Index>(options_.cell_worker.size()) != nc)
      throw ConfigError("cell-to-worker map does not match the mesh");
    const int nw = *std::max_element(options_.cell_worker.begin(), options_.cell_worker.end()) + 1;
    out.resize(nw);
    for (Index c = 0; c < nc; ++c) out[options_.cell_worker[c]].push_back(c);
    return out;
  }
  const int nw = static_cast<int>(std::max<Index>(1, std::min<Index>(options_.n_threads, nc)));
  out.resize(nw);
  const Index chunk = (nc + nw - 1) / nw;
  for (Index c = 0; c < nc; ++c) out[c / chunk].push_back(c);
  return out;
}

template <int Dim>
void FsiAssembler::assemble(const MaterialParams& mp, const FsiState& state, const FsiState& prev, ThetaStep step,
                            std::vector<double>* residual, SparseMatrix* jacobian) const {
  const DofMap& d = *dofs_;
  const Mesh& m = *mesh_;
  if (static_cast<Index>(state.x.size()) != d.n_dofs() || static_cast<Index>(prev.x.size()) != d.n_dofs())
    throw ConfigError("state vector length does not match the dof map");
  if (!(step.dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(step.theta >= 0.0 && step.theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");

  const Tables tables = make_tables(d);
  const CellKernel<Dim> kernel(mp, step, tables.cell);
  const auto groups = worker_cells();
  const int nw = static_cast<int>(groups.size());
  const Index nnz = pattern_.nnz();
  const Index n = d.n_dofs();

  if (jacobian) *jacobian = pattern_;
  if (residual) residual->assign(n, 0.0);

  std::vector<std::vector<double>> rbuf(nw), kbuf(nw);
  constexpr int kRowBlocks = 64;
  std::vector<std::mutex> block_locks(kRowBlocks);
  const Index block_rows = (n + kRowBlocks - 1) / kRowBlocks;

  auto merge_worker = [&](int w) {
    for (int b = 0; b < kRowBlocks; ++b) {
      const Index r0 = std::min(n, b * block_rows);
      const Index r1 = std::min(n, r0 + block_rows);
      std::lock_guard lock(block_locks[b]);
      if (residual)
        for (Index i = r0; i < r1; ++i) (*residual)[i] += rbuf[w][i];
      if (jacobian) {
        auto& vals = jacobian->values();
        for (Index k = pattern_.row_ptr()[r0]; k < pattern_.row_ptr()[r1]; ++k) vals[k] += kbuf[w][k];
      }
    }
  };

  parallel_workers(nw, [&](int w) {
    if (residual) rbuf[w].assign(n, 0.0);
    if (jacobian) kbuf[w].assign(nnz, 0.0);
    LocalSystem ls;
    PointGeometry<Dim> geo;
    std::vector<double> xl, x0l;
    std::vector<char> iface;
    for (Index cell : groups[w]) {
      const auto dofs = d.cell_dofs(cell);
      const int nl = static_cast<int>(dofs.size());
      const bool fluid = m.subdomain(cell) == Subdomain::Fluid;
      xl.resize(nl);
      x0l.resize(nl);
      for (int i = 0; i < nl; ++i) {
        xl[i] = state.x[dofs[i]];
        x0l[i] = prev.x[dofs[i]];
      }
      const auto nodes = d.cell_nodes(cell);
      iface.assign(nodes.size(), 0);
      for (std::size_t i = 0; i < nodes.size(); ++i) iface[i] = d.node_on_interface(nodes[i]);
      ls.reset(nl, residual != nullptr, jacobian != nullptr);
      const ShapeTable& tab = tables.cell;
      for (int q = 0; q < tab.n_points; ++q) {
        geo.compute(m, cell, tab, q);
        const auto f = detail::interpolate<Dim>(tab, q, geo, xl.data(), fluid);
        const auto f0 = detail::interpolate<Dim>(tab, q, geo, x0l.data(), fluid);
        if (fluid)
          kernel.fluid_point(ls, cell, q, geo, f, f0, iface);
        else
          kernel.solid_point(ls, cell, q, geo, f, f0);
      }
      for (int face : cell_outflow_faces_[cell]) {
        const ShapeTable& ft = tables.faces[face];
        for (int q = 0; q < ft.n_points; ++q) {
          geo.compute(m, cell, ft, q);
          const auto f = detail::interpolate<Dim>(ft, q, geo, xl.data(), true);
          const auto f0 = detail::interpolate<Dim>(ft, q, geo, x0l.data(), true);
          kernel.outflow_point(ls, cell, face, q, ft, geo, f, f0);
        }
      }
      if (residual)
        for (int i = 0; i < nl; ++i) rbuf[w][dofs[i]] += ls.r[i];
      if (jacobian) {
        for (int i = 0; i < nl; ++i)
          for (int j = 0; j < nl; ++j) {
            const double val = ls.at(i, j);
            if (val == 0.0) continue;
            const Index pos = pattern_.find(dofs[i], dofs[j]);
            if (pos < 0) throw Error("assembled entry outside the Jacobian pattern");
            kbuf[w][pos] += val;
          }
      }
    }
    if (!options_.deterministic_merge) merge_worker(w);
  });

  if (options_.deterministic_merge) {
    for (int w = 0; w < nw; ++w) {
      if (residual)
        for (Index i = 0; i < n; ++i) (*residual)[i] += rbuf[w][i];
      if (jacobian) {
        auto& vals = jacobian->values();
        for (Index k = 0; k < nnz; ++k) vals[k] += kbuf[w][k];
      }
    }
  }
}

std::vector<double> FsiAssembler::residual(const FsiState& state, const FsiState& prev, ThetaStep step,
                                           bool constrained) const {
  std::vector<double> r;
  if (mesh_->dim() == 2)
    assemble<2>(params_, state, prev, step, &r, nullptr);
  else
    assemble<3>(params_, state, prev, step, &r, nullptr);
  if (constrained)
    for (const auto& dd : dofs_->dirichlet()) r[dd.dof] = 0.0;
  return r;
}

SparseMatrix FsiAssembler::jacobian(const FsiState& state, const FsiState& prev, ThetaStep step,
                                    bool constrained) const {
  return jacobian_with(params_, state, prev, step, constrained);
}

SparseMatrix FsiAssembler::jacobian_with(const MaterialParams& params, const FsiState& state, const FsiState& prev,
                                         ThetaStep step, bool constrained) const {
  SparseMatrix a;
  if (mesh_->dim() == 2)
    assemble<2>(params, state, prev, step, nullptr, &a);
  else
    assemble<3>(params, state, prev, step, nullptr, &a);
  if (constrained)
    for (const auto& dd : dofs_->dirichlet()) a.set_identity_row(dd.dof);
  return a;
}

std::pair<double, Index> FsiAssembler::min_jacobian(const FsiState& state) const {
  const DofMap& d = *dofs_;
  const Mesh& m = *mesh_;
  const Tables tables = make_tables(d);
  const ShapeTable& tab = tables.cell;
  double best = std::numeric_limits<double>::infinity();
  Index where = -1;
  auto scan = [&]<int Dim>() {
    PointGeometry<Dim> geo;
    std::vector<double> xl;
    for (Index cell = 0; cell < m.n_cells(); ++cell) {
      if (m.subdomain(cell) != Subdomain::Fluid) continue;
      const auto dofs = d.cell_dofs(cell);
      xl.resize(dofs.size());
      for (std::size_t i = 0; i < dofs.size(); ++i) xl[i] = state.x[dofs[i]];
      for (int q = 0; q < tab.n_points; ++q) {
        geo.compute(m, cell, tab, q);
        const auto f = detail::interpolate<Dim>(tab, q, geo, xl.data(), false);
        const double j = (Tensor<Dim>::Identity() + f.grad_u).determinant();
        if (j < best) {
          best = j;
          where = cell;
        }
      }
    }
  };
  if (m.dim() == 2)
    scan.template operator()<2>();
  else
    scan.template operator()<3>();
  return {best, where};
}

void inject_dirichlet(std::vector<double>& x, const DofMap& dofs, double t, const InflowSpec& inflow) {
  for (const auto& dd : dofs.dirichlet()) {
    if (dd.inflow)
      x[dd.dof] = inflow_profile(t, dd.x, inflow.benchmark, inflow.mean_velocity)[dd.component];
    else
      x[dd.dof] = 0.0;
  }
}

void apply_dirichlet(SparseMatrix& a, std::vector<double>& rhs, const DofMap& dofs) {
  for (const auto& dd : dofs.dirichlet()) {
    a.set_identity_row(dd.dof);
    rhs[dd.dof] = 0.0;
  }
}

FdCheckResult finite_difference_check(const FsiAssembler& assembler, const SparseMatrix& jacobian,
                                      const FsiState& state, const FsiState& prev, ThetaStep step,
                                      std::span<const Index> columns, double h) {
  const Index n = assembler.dofs().n_dofs();
  std::vector<Index> cols(columns.begin(), columns.end());
  if (cols.empty())
    for (Index k = 0; k < n; ++k) cols.push_back(k);
  const SparseMatrix jt = jacobian.transpose();
  double global = 0.0;
  for (double v : jacobian.values()) global = std::max(global, std::abs(v));
  FdCheckResult out;
  FsiState sp = state;
  FsiState sm = state;
  std::vector<double> fd(n);
  for (Index k : cols) {
    const double x0 = state.x[k];
    const double hk = h * std::max(1.0, std::abs(x0));
    sp.x[k] = x0 + hk;
    sm.x[k] = x0 - hk;
    const auto rp = assembler.residual(sp, prev, step, false);
    const auto rm = assembler.residual(sm, prev, step, false);
    sp.x[k] = x0;
    sm.x[k] = x0;
    double scale = 0.0;
    for (Index i = 0; i < n; ++i) {
      fd[i] = (rp[i] - rm[i]) / (2.0 * hk);
      scale = std::max(scale, std::abs(fd[i]));
    }
    std::vector<double> col(n, 0.0);
    for (Index p = jt.row_ptr()[k]; p < jt.row_ptr()[k + 1]; ++p) col[jt.col_idx()[p]] = jt.values()[p];
    double diff = 0.0;
    for (Index i = 0; i < n; ++i) {
      scale = std::max(scale, std::abs(col[i]));
      diff = std::max(diff, std::abs(col[i] - fd[i]));
    }
    if (scale <= 1e-12 * global) continue;
    const double rel = diff / scale;
    if (rel > out.max_rel_error) {
      out.max_rel_error = rel;
      out.worst_column = k;
    }
  }
  return out;
}

double directional_fd_error(const FsiAssembler& assembler, const SparseMatrix& jacobian, const FsiState& state,
                            const FsiState& prev, ThetaStep step, std::span<const double> direction, double h) {
  FsiState sp = state;
  FsiState sm = state;
  axpy(h, direction, sp.x);
  axpy(-h, direction, sm.x);
  const auto rp = assembler.residual(sp, prev, step, false);
  const auto rm = assembler.residual(sm, prev, step, false);
  const auto jd = jacobian * direction;
  double diff = 0.0;
  for (std::size_t i = 0; i < jd.size(); ++i) diff = std::max(diff, std::abs((rp[i] - rm[i]) / (2.0 * h) - jd[i]));
  const double scale = norm_inf(jd);
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace fsi
