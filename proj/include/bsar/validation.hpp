#pragma once

// Invariant suites run by `bsar validate`.

#include <string>
#include <vector>

#include "bsar/microlocal.hpp"
#include "bsar/scene_io.hpp"

namespace bsar {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationHooks {
  /// Closed-form determinant under test; replaced by fixtures to check that
  /// the microlocal suite notices a wrong formula.
  DetFunction det = det_dpiL;
};

/// suite is one of geometry, operators, microlocal, all.
std::vector<CheckResult> run_validation(const RunConfig& cfg,
                                        const std::string& suite,
                                        const ValidationHooks& hooks = {},
                                        int threads = 1);

/// One line per check: "PASS|FAIL suite.name measured=... threshold=...".
std::string format_report(const std::vector<CheckResult>& results);

}  // namespace bsar
