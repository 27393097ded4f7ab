#pragma once

#include <string>
#include <vector>

#include "biot/bench/scenario.hpp"

namespace biot::bench {

/// Uniaxial consolidation of a box: drained, loaded top (y+) side switched on
/// at t = 0+, rollers and no-flow elsewhere.
struct TerzaghiOptions {
  int dim = 3;
  int order = 1;
  std::vector<double> extents{0.5, 1.0, 0.5};
  std::vector<int> divisions{5, 10, 5};
  double T = 0.5;
  double tau = 0.001;
  double top_pressure = -5.0;
  Vec3 top_traction{0.0, -1.0, 0.0};
  MaterialParams material;
  FixedStressConfig split;
  LineSpec line;

  TerzaghiOptions();
  /// Two-dimensional section with Q2/RT1/Q1 elements.
  static TerzaghiOptions paper_order();
  int slabs() const;
};

/// Scenario with a dG(0) grid; callers replace `grid` as needed.
Scenario terzaghi_scenario(const TerzaghiOptions& opt);

struct TimingRow {
  std::string scheme;
  int unknown_blocks = 0;
  int slabs = 0;
  long iterations = 0;
  double wall_seconds = 0.0;
  std::string status;
};

struct BenchmarkResult {
  std::vector<ScenarioRun> runs;  ///< dG(0), cG(1), dG(1), dG(1)-cG(1)
  std::vector<TimingRow> timing;

  const ScenarioRun& run(const std::string& label) const;
};

/// Grids compared by the benchmark, in run order.
std::vector<std::pair<std::string, TimeGrid>> terzaghi_grids(const TerzaghiOptions& opt);

/// Runs the four time discretizations on one shared problem. A scheme that
/// fails is recorded in its run and the timing table; the others still run.
BenchmarkResult terzaghi_benchmark(const TerzaghiOptions& opt);

}  // namespace biot::bench
