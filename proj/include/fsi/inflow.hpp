#pragma once

#include <string>

#include "fsi/common.hpp"

namespace fsi {

enum class Benchmark : std::uint8_t { Fsi2, Box3d };

const char* to_string(Benchmark b);
Benchmark benchmark_from_string(const std::string& s);
int benchmark_dim(Benchmark b);
/// Mean inflow velocity of the benchmark (1.0 for FSI-2, 3.0 for box3d).
double default_mean_velocity(Benchmark b);

/// Ramp 0.5 (1 - cos(pi t / 2)) for t < 2, held at 1 afterwards.
double smoothing_factor(double t);

/// Parabolic inflow velocity (x-directed) at a point of the inflow boundary.
Point inflow_profile(double t, const Point& x, Benchmark b, double mean_velocity);

}  // namespace fsi
