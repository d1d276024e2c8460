#include "fsi/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fsi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& key, const std::string& v, int line) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) fail(line, "'" + key + "' expects a number, got '" + v + "'");
  return d;
}

int to_int(const std::string& key, const std::string& v, int line) {
  std::size_t used = 0;
  long long i = 0;
  try {
    i = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) fail(line, "'" + key + "' expects an integer, got '" + v + "'");
  return static_cast<int>(i);
}

bool to_bool(const std::string& key, const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(line, "'" + key + "' expects true or false, got '" + v + "'");
}

using Setter = std::function<void(SolverConfig&, const std::string& key, const std::string& value, int line)>;

template <class T>
Setter number(T SolverConfig::*field) {
  return [field](SolverConfig& c, const std::string& k, const std::string& v, int line) {
    if constexpr (std::is_same_v<T, int>)
      c.*field = to_int(k, v, line);
    else
      c.*field = to_double(k, v, line);
  };
}

Setter material(double MaterialParams::*field) {
  return [field](SolverConfig& c, const std::string& k, const std::string& v, int line) {
    c.material.*field = to_double(k, v, line);
  };
}

template <class T, class Parse>
Setter parsed(T SolverConfig::*field, Parse parse) {
  return [field, parse](SolverConfig& c, const std::string&, const std::string& v, int line) {
    try {
      c.*field = parse(v);
    } catch (const ConfigError& e) {
      fail(line, e.what());
    }
  };
}

const std::map<std::string, std::map<std::string, Setter>>& key_table() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"problem",
       {{"benchmark", parsed(&SolverConfig::benchmark, benchmark_from_string)},
        {"refine_level", number(&SolverConfig::refine_level)},
        {"element_order", number(&SolverConfig::element_order)},
        {"mean_velocity", number(&SolverConfig::mean_velocity)}}},
      {"material",
       {{"rho_f", material(&MaterialParams::rho_f)},
        {"nu_f", material(&MaterialParams::nu_f)},
        {"rho_s", material(&MaterialParams::rho_s)},
        {"lambda", material(&MaterialParams::lambda)},
        {"mu", material(&MaterialParams::mu)}}},
      {"time",
       {{"theta", [](SolverConfig& c, const std::string&, const std::string& v, int) { c.theta = v; }},
        {"dt", number(&SolverConfig::dt)},
        {"end_time", number(&SolverConfig::end_time)},
        {"spinup_end", number(&SolverConfig::spinup_end)},
        {"spinup_dt", number(&SolverConfig::spinup_dt)}}},
      {"solver",
       {{"linear", parsed(&SolverConfig::linear, linear_method_from_string)},
        {"gmres_reduction", number(&SolverConfig::gmres_reduction)},
        {"gmres_max_iter", number(&SolverConfig::gmres_max_iter)},
        {"gmres_restart", number(&SolverConfig::gmres_restart)},
        {"newton_tolerance", number(&SolverConfig::newton_tolerance)},
        {"newton_max_iter", number(&SolverConfig::newton_max_iter)},
        {"quasi_newton_factor", number(&SolverConfig::quasi_newton_factor)},
        {"force_full_newton",
         [](SolverConfig& c, const std::string& k, const std::string& v, int line) {
           c.force_full_newton = to_bool(k, v, line);
         }},
        {"inner_mesh", parsed(&SolverConfig::inner_mesh, inner_kind_from_string)},
        {"inner_solid", parsed(&SolverConfig::inner_solid, inner_kind_from_string)},
        {"inner_fluid", parsed(&SolverConfig::inner_fluid, inner_kind_from_string)},
        {"inner_reduction", number(&SolverConfig::inner_reduction)},
        {"uzawa_reduction", number(&SolverConfig::uzawa_reduction)}}},
      {"parallel",
       {{"threads", number(&SolverConfig::threads)},
        {"partition", parsed(&SolverConfig::partition, partition_strategy_from_string)},
        {"deterministic_merge",
         [](SolverConfig& c, const std::string& k, const std::string& v, int line) {
           c.deterministic_merge = to_bool(k, v, line);
         }}}},
      {"output",
       {{"directory", [](SolverConfig& c, const std::string&, const std::string& v, int) { c.output_dir = v; }},
        {"prefix", [](SolverConfig& c, const std::string&, const std::string& v, int) { c.output_prefix = v; }}}},
  };
  return table;
}

}  // namespace

void SolverConfig::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError(std::string("'") + key + "' must be positive");
  };
  const int max_level = benchmark_dim(benchmark) == 2 ? kMaxRefineLevel2d : kMaxRefineLevel3d;
  if (refine_level < 0 || refine_level > max_level)
    throw ConfigError("'refine_level' must lie in [0, " + std::to_string(max_level) + "]");
  if (element_order != 1 && element_order != 2) throw ConfigError("'element_order' must be 1 or 2");
  if (!(mean_velocity >= 0.0)) throw ConfigError("'mean_velocity' must be non-negative");
  try {
    material.validate();
  } catch (const ConfigError&) {
    throw ConfigError("material parameters 'rho_f', 'nu_f', 'rho_s', 'lambda', 'mu' must be positive");
  }
  positive(dt, "dt");
  if (!(end_time >= dt)) throw ConfigError("'end_time' must be at least 'dt'");
  if (!(spinup_end >= 0.0)) throw ConfigError("'spinup_end' must be non-negative");
  positive(spinup_dt, "spinup_dt");
  if (!(end_time > spinup_end)) throw ConfigError("'end_time' must exceed 'spinup_end'");
  (void)scheme();
  positive(gmres_reduction, "gmres_reduction");
  if (gmres_max_iter < 1) throw ConfigError("'gmres_max_iter' must be at least 1");
  if (gmres_restart < 0) throw ConfigError("'gmres_restart' must be non-negative");
  positive(newton_tolerance, "newton_tolerance");
  if (newton_max_iter < 1) throw ConfigError("'newton_max_iter' must be at least 1");
  positive(quasi_newton_factor, "quasi_newton_factor");
  positive(inner_reduction, "inner_reduction");
  positive(uzawa_reduction, "uzawa_reduction");
  if (threads < 1) throw ConfigError("'threads' must be at least 1");
}

LinearSolverConfig SolverConfig::linear_config() const {
  LinearSolverConfig lc;
  lc.method = linear;
  lc.rel_reduction = gmres_reduction;
  lc.max_iter = gmres_max_iter;
  lc.restart = gmres_restart;
  lc.n_threads = threads;
  auto inner = [&](InnerKind k) {
    InnerConfig ic;
    ic.kind = k;
    ic.rel_reduction = inner_reduction;
    return ic;
  };
  lc.ldu.mesh = inner(inner_mesh);
  lc.ldu.solid = inner(inner_solid);
  lc.ldu.fluid_velocity = inner(inner_fluid);
  lc.ldu.uzawa.rel_reduction = uzawa_reduction;
  return lc;
}

NewtonOptions SolverConfig::newton_options() const {
  NewtonOptions o;
  o.tolerance = newton_tolerance;
  o.max_iter = newton_max_iter;
  o.reassembly_factor = quasi_newton_factor;
  o.force_full = force_full_newton;
  return o;
}

SolverConfig parse_config(std::istream& in) {
  SolverConfig c;
  const auto& table = key_table();
  std::string section;
  std::string raw;
  int line = 0;
  bool velocity_given = false;
  std::map<std::string, int> key_line;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (!table.contains(section)) fail(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "missing key");
    if (value.empty()) fail(line, "missing value for '" + key + "'");
    const Setter* setter = nullptr;
    if (section.empty()) {
      for (const auto& [name, keys] : table)
        if (auto it = keys.find(key); it != keys.end()) setter = &it->second;
    } else if (auto it = table.at(section).find(key); it != table.at(section).end()) {
      setter = &it->second;
    }
    if (!setter) fail(line, "unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"));
    (*setter)(c, key, value, line);
    key_line[key] = line;
    if (key == "mean_velocity") velocity_given = true;
  }
  if (!velocity_given) c.mean_velocity = default_mean_velocity(c.benchmark);
  try {
    c.validate();
  } catch (const ConfigError& e) {
    // Point at the line that set the offending key, if any.
    const std::string msg = e.what();
    const auto q0 = msg.find('\'');
    const auto q1 = q0 == std::string::npos ? q0 : msg.find('\'', q0 + 1);
    if (q1 != std::string::npos)
      if (auto it = key_line.find(msg.substr(q0 + 1, q1 - q0 - 1)); it != key_line.end()) fail(it->second, msg);
    throw;
  }
  return c;
}

SolverConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

SolverConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

namespace {

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

void write_config(std::ostream& out, const SolverConfig& c) {
  out << "[problem]\nbenchmark = " << to_string(c.benchmark) << "\nrefine_level = " << c.refine_level
      << "\nelement_order = " << c.element_order << "\nmean_velocity = " << shortest(c.mean_velocity);
  out << "\n\n[material]\nrho_f = " << shortest(c.material.rho_f) << "\nnu_f = " << shortest(c.material.nu_f)
      << "\nrho_s = " << shortest(c.material.rho_s) << "\nlambda = " << shortest(c.material.lambda)
      << "\nmu = " << shortest(c.material.mu);
  out << "\n\n[time]\ntheta = " << c.theta << "\ndt = " << shortest(c.dt) << "\nend_time = " << shortest(c.end_time)
      << "\nspinup_end = " << shortest(c.spinup_end) << "\nspinup_dt = " << shortest(c.spinup_dt);
  out << "\n\n[solver]\nlinear = " << to_string(c.linear) << "\ngmres_reduction = " << shortest(c.gmres_reduction)
      << "\ngmres_max_iter = " << c.gmres_max_iter << "\ngmres_restart = " << c.gmres_restart
      << "\nnewton_tolerance = " << shortest(c.newton_tolerance) << "\nnewton_max_iter = " << c.newton_max_iter
      << "\nquasi_newton_factor = " << shortest(c.quasi_newton_factor)
      << "\nforce_full_newton = " << (c.force_full_newton ? "true" : "false")
      << "\ninner_mesh = " << to_string(c.inner_mesh) << "\ninner_solid = " << to_string(c.inner_solid)
      << "\ninner_fluid = " << to_string(c.inner_fluid) << "\ninner_reduction = " << shortest(c.inner_reduction)
      << "\nuzawa_reduction = " << shortest(c.uzawa_reduction);
  out << "\n\n[parallel]\nthreads = " << c.threads << "\npartition = " << to_string(c.partition)
      << "\ndeterministic_merge = " << (c.deterministic_merge ? "true" : "false");
  out << "\n\n[output]\ndirectory = " << c.output_dir << "\n";
  if (!c.output_prefix.empty()) out << "prefix = " << c.output_prefix << "\n";
}

}  // namespace fsi
