#pragma once

// Seeded property suites over every module, runnable from the CLI.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kakeya {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  std::string message;  // first failure, empty on success
  double seconds = 0;
};

std::vector<std::string> selftest_suites();
// Runs every suite whose name contains `filter`; results in suite order.
std::vector<SuiteResult> run_selftest(std::string_view filter,
                                      std::uint64_t seed);

}  // namespace kakeya
