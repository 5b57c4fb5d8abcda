// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <iostream>

#include "polaris/acceptance.hpp"

int main() {
  const auto results = polaris::run_acceptance(&std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
            << " acceptance criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
