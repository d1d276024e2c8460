#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsi {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool environment_sensitive = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Criteria to run; empty runs all of them.
  std::vector<int> only;
  /// Negate the St. Venant-Kirchhoff stress in the Jacobian (mutation check).
  bool tamper_stvk = false;
  /// Refinement level of the FSI-2 Newton run.
  int newton_level = 0;
  /// Refinement level of the scaling smoke test.
  int scaling_level = 2;
  /// Thread count compared against one thread in the scaling smoke test.
  int scaling_threads = 4;
};

inline constexpr int kNumCriteria = 10;

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* log = nullptr);

/// One "[PASS] 3 name: detail" line per result.
void print_report(std::ostream& out, const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace fsi
