#include "fsi/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fsi {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Shortest representation that reads back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Mesh build_mesh(const SolverConfig& c) {
  return c.benchmark == Benchmark::Fsi2 ? build_fsi2_mesh(c.refine_level) : build_box3d_mesh(c.refine_level);
}

}  // namespace

std::string output_directory(const SolverConfig& config) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return config.output_dir;
}

int TimeSeries::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k] == name) return static_cast<int>(k);
  return -1;
}

TimeSeries read_time_series(std::istream& in) {
  TimeSeries ts;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!ts.rows.empty()) throw ConfigError("time series line " + std::to_string(n) + ": comment after data");
      ts.meta.push_back(line.substr(line.find_first_not_of("# ") == std::string::npos ? line.size()
                                                                                        : line.find_first_not_of("# ")));
      continue;
    }
    if (ts.columns.empty()) {
      if (ts.meta.empty()) throw ConfigError("time series has no column header");
      std::stringstream hs(ts.meta.back());
      std::string name;
      while (std::getline(hs, name, ',')) ts.columns.push_back(name);
      ts.meta.pop_back();
    }
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      row.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str()) throw ConfigError("time series line " + std::to_string(n) + ": bad number '" + cell + "'");
    }
    if (row.size() != ts.columns.size())
      throw ConfigError("time series line " + std::to_string(n) + ": expected " + std::to_string(ts.columns.size()) +
                        " values");
    ts.rows.push_back(std::move(row));
  }
  if (ts.columns.empty() && !ts.meta.empty()) {
    std::stringstream hs(ts.meta.back());
    std::string name;
    while (std::getline(hs, name, ',')) ts.columns.push_back(name);
    ts.meta.pop_back();
  }
  return ts;
}

TimeSeries read_time_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_time_series(in);
}

void write_time_series_row(std::ostream& out, std::span<const double> row) {
  for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << fmt(row[k]);
  out << '\n';
}

Simulation::Simulation(const SolverConfig& config) : config_(config), mesh_(build_mesh(config)) {
  config_.validate();
  dofs_ = std::make_unique<DofMap>(mesh_, ElementPair{config_.element_order});
  AssemblyOptions ao;
  ao.n_threads = config_.threads;
  ao.deterministic_merge = config_.deterministic_merge;
  if (config_.threads > 1) ao.cell_worker = partition_mesh(mesh_, config_.threads, config_.partition).owner;
  assembler_ = std::make_unique<FsiAssembler>(mesh_, *dofs_, config_.material, ao);
  solver_ = std::make_unique<LinearSolver>(*dofs_, config_.linear_config());
  state_ = FsiState::zero(*dofs_);
  prev_ = state_;
  if (config_.benchmark == Benchmark::Fsi2)
    points_ = {fsi2::kReferencePoint};
  else
    points_.assign(box3d::kEvaluationPoints.begin(), box3d::kEvaluationPoints.end());
}

NewtonStats Simulation::step(double dt) {
  ThetaScheme scheme = config_.scheme();
  scheme.set_dt(dt);
  NewtonStats stats;
  FsiState next = advance(state_, state_.t + dt, scheme, *assembler_, *solver_, config_.inflow(),
                          config_.newton_options(), &stats);
  prev_ = std::move(state_);
  state_ = std::move(next);
  return stats;
}

void Simulation::spinup() {
  const double t_end = config_.spinup_end;
  const auto n = static_cast<long>(std::ceil(t_end / config_.spinup_dt - 1e-9));
  for (long k = 1; k <= n; ++k) {
    const double t_next = std::min(t_end, k * config_.spinup_dt);
    step(t_next - state_.t);
    state_.t = t_next;
  }
}

std::vector<std::string> Simulation::columns() const {
  std::vector<std::string> c{"t"};
  const int dim = mesh_.dim();
  const char* comp[] = {"ux", "uy", "uz"};
  for (std::size_t p = 0; p < points_.size(); ++p)
    for (int a = 0; a < dim; ++a)
      c.push_back(points_.size() == 1 ? comp[a] : "P" + std::to_string(p + 1) + "_" + comp[a]);
  c.insert(c.end(), {"drag", "lift"});
  if (dim == 3) c.push_back("side");
  c.insert(c.end(), {"newton_iters", "avg_gmres_iters"});
  return c;
}

std::vector<double> Simulation::row(const NewtonStats& stats) const {
  std::vector<double> r{state_.t};
  for (const Point& p : points_) {
    const Point u = evaluate_point(state_, mesh_, *dofs_, p);
    for (int a = 0; a < mesh_.dim(); ++a) r.push_back(u[a]);
  }
  const BodyForce f = evaluate_drag_lift(state_, mesh_, *dofs_, config_.material);
  r.push_back(f.drag);
  r.push_back(f.lift);
  if (mesh_.dim() == 3) r.push_back(f.side);
  r.push_back(stats.iterations);
  r.push_back(stats.mean_gmres());
  return r;
}

std::vector<std::string> Simulation::header_lines() const {
  const auto& m = config_.material;
  const ThetaScheme s = config_.scheme();
  std::ostringstream a, b, c;
  a << "benchmark=" << to_string(config_.benchmark) << " refine_level=" << config_.refine_level
    << " element_order=" << config_.element_order << " cells=" << mesh_.n_cells() << " dofs=" << dofs_->n_dofs()
    << " mean_velocity=" << fmt(config_.mean_velocity);
  b << "rho_f=" << fmt(m.rho_f) << " nu_f=" << fmt(m.nu_f) << " rho_s=" << fmt(m.rho_s) << " lambda=" << fmt(m.lambda)
    << " mu=" << fmt(m.mu);
  c << "theta=" << config_.theta << "(" << fmt(s.theta()) << ") dt=" << fmt(config_.dt)
    << " end_time=" << fmt(config_.end_time) << " spinup_end=" << fmt(config_.spinup_end)
    << " linear=" << to_string(config_.linear) << " gmres_reduction=" << fmt(config_.gmres_reduction)
    << " newton_tolerance=" << fmt(config_.newton_tolerance) << " threads=" << config_.threads;
  return {a.str(), b.str(), c.str()};
}

RunResult run(const SolverConfig& config, std::ostream* log) {
  RunResult res;
  const std::string dir = output_directory(config);
  std::filesystem::create_directories(dir);
  res.csv_path = (std::filesystem::path(dir) / (config.prefix() + ".csv")).string();
  std::ofstream out(res.csv_path);
  if (!out) throw Error("cannot write '" + res.csv_path + "'");

  Simulation sim(config);
  for (const auto& h : sim.header_lines()) {
    out << "# " << h << '\n';
    if (log) *log << h << '\n';
  }
  const auto cols = sim.columns();
  out << "# ";
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << '\n';
  out.flush();
  try {
    if (config.spinup_end > 0.0) {
      if (log) *log << "spin-up to t=" << config.spinup_end << '\n';
      sim.spinup();
    }
    const auto n_steps = static_cast<long>(std::llround((config.end_time - config.spinup_end) / config.dt));
    for (long k = 1; k <= n_steps; ++k) {
      const double t_next = config.spinup_end + k * config.dt;
      const NewtonStats st = sim.step(t_next - sim.state().t);
      FsiState s = sim.state();
      s.t = t_next;
      sim.set_state(std::move(s));
      const auto row = sim.row(st);
      write_time_series_row(out, row);
      out.flush();
      ++res.steps;
      if (log) *log << "t=" << fmt(t_next) << " newton=" << st.iterations << " gmres=" << st.mean_gmres() << '\n';
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    out.flush();
    res.exit_code = 1;
    res.error = e.what();
    if (log) *log << "run failed at t=" << fmt(sim.state().t) << ": " << e.what() << '\n';
  }
  return res;
}

std::vector<ScalingRow> scaling_run(const SolverConfig& config, std::span<const int> threads, std::ostream* log,
                                    int repeats) {
  std::vector<ScalingRow> rows;
  for (int n : threads) {
    if (n < 1) throw ConfigError("thread counts must be at least 1");
    SolverConfig c = config;
    c.threads = n;
    c.linear = LinearMethod::GmresLdu;
    Simulation sim(c);
    const double t = std::max(c.spinup_end, 2.0);
    FsiState prev = FsiState::zero(sim.dofs());
    FsiState state = prev;
    state.t = t;
    inject_dirichlet(state.x, sim.dofs(), t, c.inflow());
    const ThetaStep step = c.scheme().step();
    ScalingRow row;
    row.threads = n;
    row.n_dofs = sim.dofs().n_dofs();
    row.t_assemble = 1e300;
    row.t_solve = 1e300;
    for (int rep = 0; rep < repeats; ++rep) {
      auto t0 = std::chrono::steady_clock::now();
      auto r = sim.assembler().residual(state, prev, step);
      const SparseMatrix j = sim.assembler().jacobian(state, prev, step);
      row.t_assemble = std::min(row.t_assemble, seconds_since(t0));
      t0 = std::chrono::steady_clock::now();
      sim.solver().setup(j, step.dt * step.theta);
      for (double& v : r) v = -v;
      (void)sim.solver().solve(r);
      const double ts = seconds_since(t0);
      if (ts < row.t_solve) {
        row.t_solve = ts;
        const auto ct = sim.solver().component_times();
        row.t_fluid = ct.fluid;
        row.t_solid = ct.solid;
        row.t_mesh = ct.mesh;
        row.gmres_iters = sim.solver().last_iterations();
      }
    }
    if (log)
      *log << "threads=" << n << " assemble=" << row.t_assemble << "s solve=" << row.t_solve
           << "s gmres=" << row.gmres_iters << '\n';
    rows.push_back(row);
  }
  return rows;
}

void write_scaling_csv(std::ostream& out, std::span<const ScalingRow> rows) {
  out << "threads,n_dofs,t_assemble_s,t_solve_s,t_fluid_s,t_solid_s,t_mesh_s,gmres_iters\n";
  for (const auto& r : rows)
    out << r.threads << ',' << r.n_dofs << ',' << fmt(r.t_assemble) << ',' << fmt(r.t_solve) << ',' << fmt(r.t_fluid)
        << ',' << fmt(r.t_solid) << ',' << fmt(r.t_mesh) << ',' << r.gmres_iters << '\n';
}

}  // namespace fsi
