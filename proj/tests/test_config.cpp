#include <doctest.h>

#include <sstream>

#include "fsi/config.hpp"

using namespace fsi;

namespace {

std::string error_of(const std::string& text) {
  try {
    (void)parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("empty file gives the defaults") {
  const SolverConfig c = parse_config_string("");
  CHECK(c.benchmark == Benchmark::Fsi2);
  CHECK(c.refine_level == 0);
  CHECK(c.dt == 0.005);
  CHECK(c.end_time == 0.5);
  CHECK(c.mean_velocity == 1.0);
  CHECK(c.material.rho_s == 1e4);
  CHECK(c.material.nu_f == 1e-3);
  CHECK(c.material.lambda == 2e6);
  CHECK(c.material.mu == 0.5e6);
  CHECK(c.gmres_reduction == 1e3);
  CHECK(c.newton_tolerance == 1e-6);
  CHECK(c.quasi_newton_factor == 0.1);
  CHECK(c.linear == LinearMethod::GmresLdu);
}

TEST_CASE("shifted Crank-Nicolson theta") {
  const SolverConfig c = parse_config_string("[time]\ntheta = shifted_cn\ndt = 0.005\n");
  CHECK(c.scheme().theta() == doctest::Approx(0.505).epsilon(1e-15));
}

TEST_CASE("errors name the key and line") {
  const std::string e = error_of("[time]\n\ndt = -1\n");
  CHECK(e.find("dt") != std::string::npos);
  CHECK(e.find("3") != std::string::npos);
  CHECK(error_of("[time]\nfoo = 1\n").find("foo") != std::string::npos);
  CHECK(error_of("[nowhere]\n").find("nowhere") != std::string::npos);
  CHECK(error_of("[time]\ndt 0.1\n").find("line 2") != std::string::npos);
  CHECK(error_of("[time]\ndt = abc\n").find("dt") != std::string::npos);
  CHECK(error_of("[problem]\nbenchmark = fsi9\n").find("fsi9") != std::string::npos);
  CHECK(error_of("[problem]\nrefine_level = 9\n").find("refine_level") != std::string::npos);
}

TEST_CASE("box3d mean velocity default") {
  CHECK(parse_config_string("[problem]\nbenchmark = box3d\n").mean_velocity == 3.0);
  CHECK(parse_config_string("[problem]\nbenchmark = box3d\nmean_velocity = 0\n").mean_velocity == 0.0);
}

TEST_CASE("write and parse round trip") {
  SolverConfig c;
  c.benchmark = Benchmark::Box3d;
  c.mean_velocity = 2.5;
  c.dt = 0.01;
  c.theta = "implicit";
  c.threads = 3;
  c.partition = PartitionStrategy::Split;
  c.linear = LinearMethod::Direct;
  c.output_prefix = "case_a";
  std::ostringstream out;
  write_config(out, c);
  const SolverConfig d = parse_config_string(out.str());
  std::ostringstream again;
  write_config(again, d);
  CHECK(again.str() == out.str());
}
