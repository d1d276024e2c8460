#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsi/runner.hpp"

using namespace fsi;

namespace {

std::string temp_dir(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / ("fsi_test_" + name);
  std::filesystem::remove_all(d);
  return d.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("zero-inflow run writes zero functionals") {
  SolverConfig c;
  c.mean_velocity = 0.0;
  c.dt = 0.005;
  c.end_time = 0.005;
  c.output_dir = temp_dir("zero");
  const RunResult r = run(c);
  REQUIRE(r.exit_code == 0);
  const TimeSeries ts = read_time_series_file(r.csv_path);
  REQUIRE(ts.rows.size() == 1);
  CHECK(ts.columns == std::vector<std::string>{"t", "ux", "uy", "drag", "lift", "newton_iters", "avg_gmres_iters"});
  for (std::size_t k = 1; k < ts.columns.size(); ++k) CHECK(ts.rows[0][k] == 0.0);
  CHECK(ts.rows[0][0] == 0.005);
}

TEST_CASE("run header echoes the material") {
  SolverConfig c;
  c.mean_velocity = 0.0;
  c.end_time = 0.005;
  c.output_dir = temp_dir("header");
  const std::string text = slurp(run(c).csv_path);
  CHECK(text.find("rho_s=10000") != std::string::npos);
  CHECK(text.find("nu_f=0.001") != std::string::npos);
  CHECK(text.find("lambda=2e+06") != std::string::npos);
  CHECK(text.find("mu=5e+05") != std::string::npos);
}

TEST_CASE("output directory override") {
  SolverConfig c;
  c.output_dir = "ignored";
  setenv(kOutputDirEnv, "/tmp/fsi_override", 1);
  CHECK(output_directory(c) == "/tmp/fsi_override");
  unsetenv(kOutputDirEnv);
  CHECK(output_directory(c) == "ignored");
}

TEST_CASE("short 3D run: evaluation points and symmetry") {
  SolverConfig c;
  c.benchmark = Benchmark::Box3d;
  c.mean_velocity = 3.0;
  c.dt = 0.01;
  c.end_time = 0.05;
  c.output_dir = temp_dir("box3d");
  const RunResult r = run(c);
  REQUIRE(r.exit_code == 0);
  const TimeSeries ts = read_time_series_file(r.csv_path);
  REQUIRE(ts.rows.size() == 5);
  for (int p = 1; p <= 4; ++p)
    for (const char* comp : {"ux", "uy", "uz"})
      CHECK(ts.column("P" + std::to_string(p) + "_" + comp) >= 0);
  CHECK(ts.column("side") >= 0);
  for (const auto& row : ts.rows) {
    CHECK(row[0] > 0.0);
    for (int p = 1; p <= 4; ++p) CHECK(std::abs(row[ts.column("P" + std::to_string(p) + "_uz")]) <= 1e-4);
  }
  for (std::size_t k = 1; k < ts.rows.size(); ++k) CHECK(ts.rows[k][0] > ts.rows[k - 1][0]);
}

TEST_CASE("repeated single-thread runs are bit-identical") {
  SolverConfig c;
  c.end_time = 0.02;
  c.spinup_end = 0.01;
  c.spinup_dt = 0.01;
  c.mean_velocity = 20.0;
  c.output_dir = temp_dir("det_a");
  const std::string a = slurp(run(c).csv_path);
  c.output_dir = temp_dir("det_b");
  const std::string b = slurp(run(c).csv_path);
  CHECK(a == b);
  std::istringstream in(a);
  const TimeSeries ts = read_time_series(in);
  CHECK(ts.rows.size() == 2);
  CHECK(ts.rows[1][ts.column("drag")] != 0.0);
}

TEST_CASE("drag after the inflow ramp") {
  SolverConfig c;
  c.spinup_end = 2.0;
  c.spinup_dt = 0.05;
  c.end_time = 2.01;
  c.output_dir = temp_dir("drag");
  const RunResult r = run(c);
  REQUIRE(r.exit_code == 0);
  const TimeSeries ts = read_time_series_file(r.csv_path);
  const double drag = ts.rows.back()[ts.column("drag")];
  CHECK(drag > 50.0);
  CHECK(drag < 500.0);
}

TEST_CASE("time series reader") {
  std::istringstream in("# meta\n# a,b\n1,2\n3,4\n");
  const TimeSeries ts = read_time_series(in);
  CHECK(ts.meta == std::vector<std::string>{"meta"});
  CHECK(ts.rows.size() == 2);
  CHECK(ts.column("b") == 1);
  std::istringstream bad("# a,b\n1\n");
  CHECK_THROWS_AS(read_time_series(bad), ConfigError);
}
