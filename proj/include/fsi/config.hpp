#pragma once

#include <iosfwd>
#include <string>

#include "fsi/inflow.hpp"
#include "fsi/kinematics.hpp"
#include "fsi/linear_solver.hpp"
#include "fsi/partition.hpp"
#include "fsi/time_newton.hpp"

namespace fsi {

struct SolverConfig {
  // [problem]
  Benchmark benchmark = Benchmark::Fsi2;
  int refine_level = 0;
  int element_order = 2;
  double mean_velocity = 1.0;  ///< benchmark default unless overridden
  // [material]
  MaterialParams material;
  // [time]
  std::string theta = "shifted_cn";
  double dt = 0.005;
  double end_time = 0.5;
  double spinup_end = 0.0;  ///< coarse steps up to this time before the recorded run
  double spinup_dt = 0.05;
  // [solver]
  LinearMethod linear = LinearMethod::GmresLdu;
  double gmres_reduction = 1e3;
  int gmres_max_iter = 1000;
  int gmres_restart = 100;
  double newton_tolerance = 1e-6;
  int newton_max_iter = 30;
  double quasi_newton_factor = 0.1;
  bool force_full_newton = false;
  InnerKind inner_mesh = InnerKind::SparseDirect;
  InnerKind inner_solid = InnerKind::SparseDirect;
  InnerKind inner_fluid = InnerKind::SparseDirect;
  double inner_reduction = 1e4;
  double uzawa_reduction = 1e2;
  // [parallel]
  int threads = 1;
  PartitionStrategy partition = PartitionStrategy::Default;
  bool deterministic_merge = true;
  // [output]
  std::string output_dir = "output";
  std::string output_prefix;  ///< defaults to the benchmark name

  /// Range checks; throws ConfigError naming the offending key.
  void validate() const;
  ThetaScheme scheme() const { return ThetaScheme::parse(theta, dt); }
  LinearSolverConfig linear_config() const;
  NewtonOptions newton_options() const;
  InflowSpec inflow() const { return {benchmark, mean_velocity}; }
  std::string prefix() const { return output_prefix.empty() ? to_string(benchmark) : output_prefix; }
};

/// Parses `key = value` lines grouped under [section] headers. `#` starts a
/// comment. Unknown sections or keys, malformed values and out-of-range
/// values raise ConfigError with the line number.
SolverConfig parse_config(std::istream& in);
SolverConfig parse_config_string(const std::string& text);
SolverConfig parse_config_file(const std::string& path);

/// Writes the config in the same format (round-trips through parse_config).
void write_config(std::ostream& out, const SolverConfig& c);

}  // namespace fsi
