#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fsi {

using Index = std::int64_t;
using Point = std::array<double, 3>;

/// Base class for all runtime failures raised by the solver stack.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request would exceed the documented memory guard.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent user configuration (mesh, dof layout, solver settings).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The ALE map lost admissibility (det F <= 0) somewhere.
class MeshDegenerationError : public Error {
 public:
  MeshDegenerationError(const std::string& what, Index cell, double jacobian)
      : Error(what), cell_(cell), jacobian_(jacobian) {}
  Index cell() const noexcept { return cell_; }
  double jacobian() const noexcept { return jacobian_; }

 private:
  Index cell_;
  double jacobian_;
};

/// A point query did not hit any cell.
class QueryError : public Error {
 public:
  using Error::Error;
};

/// A (block) factorization encountered a singular pivot.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

enum class Subdomain : std::uint8_t { Fluid, Solid };

enum class BoundaryTag : std::uint8_t { Inflow, Outflow, Top, Bottom, Obstacle, SolidBase };

const char* to_string(Subdomain s);
const char* to_string(BoundaryTag t);
Subdomain subdomain_from_string(const std::string& s);
BoundaryTag boundary_tag_from_string(const std::string& s);

}  // namespace fsi
