// Command line driver: run a configured benchmark, run the acceptance
// checks, or time threaded assembly and preconditioning.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fsi/acceptance.hpp"
#include "fsi/runner.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::vector<int> parse_threads(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || n < 1) throw fsi::ConfigError("--threads: '" + item + "' is not a positive integer");
    out.push_back(n);
  }
  if (out.empty()) throw fsi::ConfigError("--threads: empty list");
  return out;
}

int cmd_run(const std::string& path, bool quiet) {
  const fsi::SolverConfig config = fsi::parse_config_file(path);
  const fsi::RunResult res = fsi::run(config, quiet ? nullptr : &std::cerr);
  std::cout << res.csv_path << '\n';
  if (res.exit_code != 0) std::cerr << "error: " << res.error << '\n';
  return res.exit_code;
}

int cmd_verify(const fsi::AcceptanceOptions& options, bool quiet) {
  const auto results = fsi::run_acceptance(options, quiet ? nullptr : &std::cerr);
  fsi::print_report(std::cout, results);
  return fsi::all_passed(results) ? 0 : kExitRuntime;
}

int cmd_scaling(const std::string& path, const std::string& threads, bool quiet) {
  const fsi::SolverConfig config = fsi::parse_config_file(path);
  const auto counts = parse_threads(threads);
  const auto rows = fsi::scaling_run(config, counts, quiet ? nullptr : &std::cerr);
  const std::string dir = fsi::output_directory(config);
  std::filesystem::create_directories(dir);
  const auto csv = std::filesystem::path(dir) / (config.prefix() + "_scaling.csv");
  std::ofstream out(csv);
  if (!out) throw fsi::Error("cannot write '" + csv.string() + "'");
  fsi::write_scaling_csv(out, rows);
  fsi::write_scaling_csv(std::cout, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monolithic ALE fluid-structure interaction benchmarks"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress output");

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run the time loop of a configuration and write a CSV time series");
  run->add_option("config", run_config, "Configuration file")->required();

  fsi::AcceptanceOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "Run the acceptance checks and print one line per criterion");
  verify->add_option("--only", verify_opts.only, "Criterion ids to run")->delimiter(',');
  verify->add_flag("--tamper-stvk", verify_opts.tamper_stvk, "Negate the solid stress in the Jacobian");
  verify->add_option("--newton-level", verify_opts.newton_level, "Refinement level of the Newton run")
      ->check(CLI::Range(0, 1));
  verify->add_option("--scaling-level", verify_opts.scaling_level, "Refinement level of the scaling check")
      ->check(CLI::Range(2, 5));

  std::string scaling_config;
  std::string threads = "1,2,4";
  auto* scaling = app.add_subcommand("scaling", "Time assembly and one preconditioned solve per thread count");
  scaling->add_option("config", scaling_config, "Configuration file")->required();
  scaling->add_option("--threads", threads, "Comma-separated thread counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_config, quiet);
    if (*verify) return cmd_verify(verify_opts, quiet);
    if (*scaling) return cmd_scaling(scaling_config, threads, quiet);
  } catch (const fsi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
