#pragma once

#include <string>
#include <vector>

namespace emdenflow::verify {

struct CheckResult {
  std::string module;
  std::string name;
  double expected;
  double actual;
  double tolerance;
  bool pass;
  std::string detail;
};

struct Options {
  double kc_bracket_lo = 0.5;
  double kc_bracket_hi = 2.0;
};

/// Acceptance checks: the pinned constants and property suites, one result
/// per named criterion.
std::vector<CheckResult> run_acceptance(const Options& opts = {});

/// Module invariant suites followed by the acceptance checks.
std::vector<CheckResult> run_all(const Options& opts = {});

/// Nested report: module -> check -> {expected, actual, tolerance, pass}.
std::string report_json(const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace emdenflow::verify
