#pragma once

// Property suites run by `sigshape selftest`.

#include <cstdint>
#include <string>
#include <vector>

namespace sigshape {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst observed deviation.
  double worst = 0.0;
  double tolerance = 0.0;
};

std::vector<CheckResult> run_selftest(std::uint64_t seed = 7, int trials = 10);

}  // namespace sigshape
