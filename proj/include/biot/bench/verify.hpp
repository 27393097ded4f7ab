#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "biot/bench/scenario.hpp"

namespace biot::bench {

/// 2d consolidation on the unit square with n x n cells: loaded, drained top,
/// rollers and no-flow elsewhere, loads switched on at t = 0+.
Scenario small_consolidation(int n, int order, double T, int N, const TimeScheme& scheme);

/// Closed 2d box (no-flow, rollers, no loads) started from a nonuniform
/// pressure p0 = 1 + cos(pi x) cos(pi y) and sigma0 = -alpha p0 I.
Scenario closed_box(int n, double T, int N);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Self-checks for `biot verify`. `full` adds the manufactured-solution study.
std::vector<CheckResult> run_verification(bool full);

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks);

}  // namespace biot::bench
