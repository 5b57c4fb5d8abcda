#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace polaris {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Pinned membrane level of the spherical steady state for the default
/// parameters at total mass 1 (independent Simpson + bisection oracle).
inline constexpr double kSphericalU0DefaultMass1 = 0.059855912343032511;

/// Runs the built-in acceptance scenarios. When log is given, one
/// "PASS"/"FAIL" line per criterion is written as soon as it finishes.
std::vector<CriterionResult> run_acceptance(std::ostream* log = nullptr);

}  // namespace polaris
