#include "fsi/inflow.hpp"

#include <cmath>
#include <numbers>

#include "fsi/mesh.hpp"

namespace fsi {

const char* to_string(Benchmark b) { return b == Benchmark::Fsi2 ? "fsi2" : "box3d"; }

Benchmark benchmark_from_string(const std::string& s) {
  if (s == "fsi2") return Benchmark::Fsi2;
  if (s == "box3d") return Benchmark::Box3d;
  throw ConfigError("unknown benchmark '" + s + "' (expected fsi2 or box3d)");
}

int benchmark_dim(Benchmark b) { return b == Benchmark::Fsi2 ? 2 : 3; }

double default_mean_velocity(Benchmark b) { return b == Benchmark::Fsi2 ? 1.0 : 3.0; }

double smoothing_factor(double t) {
  if (t >= 2.0) return 1.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * t / 2.0));
}

Point inflow_profile(double t, const Point& x, Benchmark b, double mean_velocity) {
  const double s = smoothing_factor(t);
  if (b == Benchmark::Fsi2) {
    const double h = fsi2::kHeight;
    const double y = x[1];
    return {6.0 * y * (h - y) / (h * h) * s * mean_velocity, 0.0, 0.0};
  }
  const double h = box3d::kHeight;
  const double y = x[1];
  const double z = x[2];
  const double h4 = h * h * h * h;
  return {81.0 / 16.0 * y * (h - y) * (h * h - z * z) / h4 * s * mean_velocity, 0.0, 0.0};
}

}  // namespace fsi
