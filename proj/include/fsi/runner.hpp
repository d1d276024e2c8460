#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "fsi/config.hpp"
#include "fsi/functionals.hpp"

namespace fsi {

/// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutputDirEnv = "FSI_OUTPUT_DIR";

/// Output directory after applying the environment override.
std::string output_directory(const SolverConfig& config);

/// Comma-separated time series with `#`-prefixed metadata lines; the last
/// comment line before the data names the columns.
struct TimeSeries {
  std::vector<std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;
};

TimeSeries read_time_series(std::istream& in);
TimeSeries read_time_series_file(const std::string& path);
void write_time_series_row(std::ostream& out, std::span<const double> row);

/// Mesh, dofs, assembler, linear solver and the current state of one
/// configured benchmark.
class Simulation {
 public:
  explicit Simulation(const SolverConfig& config);

  const SolverConfig& config() const noexcept { return config_; }
  const Mesh& mesh() const noexcept { return mesh_; }
  const DofMap& dofs() const noexcept { return *dofs_; }
  const FsiAssembler& assembler() const noexcept { return *assembler_; }
  FsiAssembler& assembler() noexcept { return *assembler_; }
  LinearSolver& solver() noexcept { return *solver_; }
  const FsiState& state() const noexcept { return state_; }
  void set_state(FsiState s) { state_ = std::move(s); }
  const FsiState& previous() const noexcept { return prev_; }

  /// Evaluation points of the benchmark (one in 2D, four in 3D).
  const std::vector<Point>& evaluation_points() const noexcept { return points_; }

  /// One theta step of size dt; returns the Newton statistics.
  NewtonStats step(double dt);
  /// Coarse steps up to config().spinup_end (not recorded).
  void spinup();

  std::vector<std::string> columns() const;
  std::vector<double> row(const NewtonStats& stats) const;
  std::vector<std::string> header_lines() const;

 private:
  SolverConfig config_;
  Mesh mesh_;
  std::unique_ptr<DofMap> dofs_;
  std::unique_ptr<FsiAssembler> assembler_;
  std::unique_ptr<LinearSolver> solver_;
  FsiState state_;
  FsiState prev_;
  std::vector<Point> points_;
};

struct RunResult {
  int exit_code = 0;
  std::string csv_path;
  std::string error;
  int steps = 0;
};

/// Runs the configured time loop, writing one CSV row per step. Runtime
/// failures flush the rows written so far and return exit code 1.
RunResult run(const SolverConfig& config, std::ostream* log = nullptr);

struct ScalingRow {
  int threads = 1;
  Index n_dofs = 0;
  double t_assemble = 0.0;
  double t_solve = 0.0;
  double t_fluid = 0.0;
  double t_solid = 0.0;
  double t_mesh = 0.0;
  int gmres_iters = 0;
};

/// Times residual+Jacobian assembly and one preconditioned linear solve of
/// the first Newton step at t = max(spinup_end, 2) for every thread count.
std::vector<ScalingRow> scaling_run(const SolverConfig& config, std::span<const int> threads,
                                    std::ostream* log = nullptr, int repeats = 3);
void write_scaling_csv(std::ostream& out, std::span<const ScalingRow> rows);

}  // namespace fsi
