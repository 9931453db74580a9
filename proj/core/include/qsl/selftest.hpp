#pragma once

#include <string>
#include <vector>

namespace qsl {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

/// Invariant suites of every module plus the documented closed-form checks.
/// Setting the environment variable QSL_SELFTEST_TIGHTEN injects an
/// impossible tolerance into one check so harnesses can verify the nonzero
/// exit path.
std::vector<CheckResult> run_selftests();

}  // namespace qsl
