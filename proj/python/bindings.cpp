#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

#include "fsi/acceptance.hpp"
#include "fsi/dense_ldu.hpp"
#include "fsi/partition.hpp"
#include "fsi/runner.hpp"

namespace py = pybind11;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict stats_dict(const fsi::NewtonStats& s) {
  py::dict d;
  d["iterations"] = s.iterations;
  d["reassemblies"] = s.reassemblies;
  d["residual_history"] = s.residual_history;
  d["gmres_iterations"] = s.gmres_iterations;
  d["converged"] = s.converged;
  return d;
}

fsi::Mesh benchmark_mesh(const std::string& benchmark, int level) {
  return fsi::benchmark_from_string(benchmark) == fsi::Benchmark::Fsi2 ? fsi::build_fsi2_mesh(level)
                                                                       : fsi::build_box3d_mesh(level);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Monolithic ALE fluid-structure interaction solver";

  // Translators are tried newest first, so the base class goes first.
  py::register_exception<fsi::Error>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<fsi::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<fsi::SolverConfig>(m, "Config")
      .def(py::init<>())
      .def_static("from_string", &fsi::parse_config_string, py::arg("text"))
      .def_static("from_file", &fsi::parse_config_file, py::arg("path"))
      .def("to_string",
           [](const fsi::SolverConfig& c) {
             std::ostringstream s;
             fsi::write_config(s, c);
             return s.str();
           })
      .def("validate", &fsi::SolverConfig::validate)
      .def_property(
          "benchmark", [](const fsi::SolverConfig& c) { return std::string(fsi::to_string(c.benchmark)); },
          [](fsi::SolverConfig& c, const std::string& s) {
            c.benchmark = fsi::benchmark_from_string(s);
            c.mean_velocity = fsi::default_mean_velocity(c.benchmark);
          })
      .def_readwrite("refine_level", &fsi::SolverConfig::refine_level)
      .def_readwrite("mean_velocity", &fsi::SolverConfig::mean_velocity)
      .def_readwrite("theta", &fsi::SolverConfig::theta)
      .def_readwrite("dt", &fsi::SolverConfig::dt)
      .def_readwrite("end_time", &fsi::SolverConfig::end_time)
      .def_readwrite("spinup_end", &fsi::SolverConfig::spinup_end)
      .def_readwrite("spinup_dt", &fsi::SolverConfig::spinup_dt)
      .def_readwrite("threads", &fsi::SolverConfig::threads)
      .def_readwrite("output_dir", &fsi::SolverConfig::output_dir)
      .def_readwrite("output_prefix", &fsi::SolverConfig::output_prefix)
      .def_property_readonly("theta_value", [](const fsi::SolverConfig& c) { return c.scheme().theta(); })
      .def_property(
          "linear", [](const fsi::SolverConfig& c) { return std::string(fsi::to_string(c.linear)); },
          [](fsi::SolverConfig& c, const std::string& s) { c.linear = fsi::linear_method_from_string(s); });

  py::class_<fsi::Simulation>(m, "Simulation")
      .def(py::init<const fsi::SolverConfig&>(), py::arg("config"))
      .def_property_readonly("n_dofs", [](const fsi::Simulation& s) { return s.dofs().n_dofs(); })
      .def_property_readonly("n_cells", [](const fsi::Simulation& s) { return s.mesh().n_cells(); })
      .def_property_readonly("time", [](const fsi::Simulation& s) { return s.state().t; })
      .def_property_readonly("columns", &fsi::Simulation::columns)
      .def("spinup", &fsi::Simulation::spinup)
      .def(
          "step",
          [](fsi::Simulation& s, double dt) {
            const fsi::NewtonStats st = s.step(dt);
            return py::make_tuple(s.row(st), stats_dict(st));
          },
          py::arg("dt"), "Advance one step; returns (csv row, Newton statistics).")
      .def("state", [](const fsi::Simulation& s) {
        return to_array(s.state().x);
      });

  m.def(
      "run",
      [](const fsi::SolverConfig& c) {
        fsi::RunResult r;
        {
          py::gil_scoped_release release;
          r = fsi::run(c);
        }
        py::dict d;
        d["exit_code"] = r.exit_code;
        d["csv_path"] = r.csv_path;
        d["error"] = r.error;
        d["steps"] = r.steps;
        return d;
      },
      py::arg("config"));

  m.def(
      "read_time_series",
      [](const std::string& path) {
        const fsi::TimeSeries ts = fsi::read_time_series_file(path);
        py::dict d;
        d["meta"] = ts.meta;
        d["columns"] = ts.columns;
        d["rows"] = ts.rows;
        return d;
      },
      py::arg("path"));

  m.def(
      "verify",
      [](std::vector<int> only, bool tamper_stvk) {
        fsi::AcceptanceOptions o;
        o.only = std::move(only);
        o.tamper_stvk = tamper_stvk;
        std::vector<fsi::CriterionResult> res;
        {
          py::gil_scoped_release release;
          res = fsi::run_acceptance(o);
        }
        py::list out;
        for (const auto& r : res) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["environment_sensitive"] = r.environment_sensitive;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          out.append(d);
        }
        return out;
      },
      py::arg("only") = std::vector<int>{}, py::arg("tamper_stvk") = false);

  m.def(
      "imbalance",
      [](const std::string& benchmark, int level, int n_parts, const std::string& strategy) {
        const fsi::Mesh mesh = benchmark_mesh(benchmark, level);
        const fsi::DofMap dofs(mesh, fsi::ElementPair{2});
        const auto p = fsi::partition_mesh(mesh, n_parts, fsi::partition_strategy_from_string(strategy));
        const auto rep = fsi::imbalance(p, mesh, dofs);
        py::dict d;
        d["dofs_per_rank"] = rep.dofs_per_rank;
        d["ratio"] = rep.ratio;
        d["cross_rank_facets"] = rep.cross_rank_facets;
        return d;
      },
      py::arg("benchmark"), py::arg("level"), py::arg("n_parts"), py::arg("strategy"));

  m.def(
      "gmres",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& b, double rel_reduction, int max_iter) {
        if (a.ndim() != 2 || a.shape(0) != a.shape(1) || b.size() != a.shape(0))
          throw fsi::ConfigError("gmres expects a square matrix and a matching right-hand side");
        const Eigen::Index n = a.shape(0);
        const Eigen::MatrixXd dense = Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(a.data(), n, n);
        const fsi::SparseMatrix sa = fsi::SparseMatrix::from_dense(dense);
        const auto rhs = to_vector(b);
        const auto res = fsi::gmres(fsi::as_operator(sa), {}, rhs, fsi::GmresOptions{rel_reduction, max_iter, 0});
        return py::make_tuple(to_array(res.x), res.iterations);
      },
      py::arg("a"), py::arg("b"), py::arg("rel_reduction") = 1e3, py::arg("max_iter") = 1000);

  m.def(
      "exact_ldu_residual",
      [](std::array<int, 3> sizes, unsigned seed) {
        const fsi::DenseBlocks blocks = fsi::random_dense_blocks(sizes, seed);
        const Eigen::MatrixXd a = blocks.assemble();
        const Eigen::VectorXd r = Eigen::VectorXd::Ones(a.rows());
        return (a * fsi::exact_ldu_reference(blocks, r) - r).norm() / r.norm();
      },
      py::arg("sizes"), py::arg("seed"), "Relative residual of the exact block LDU solve of a random system.");
}
