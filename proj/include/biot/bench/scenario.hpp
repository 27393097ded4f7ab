#pragma once

#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "biot/bench/trace.hpp"
#include "biot/scheme.hpp"

namespace biot::bench {

/// Everything needed to set up and march one problem.
struct Scenario {
  std::vector<double> extents;
  std::vector<int> divisions;
  BoundarySpec boundary;
  int order = 1;
  CellMaterials materials;
  ReferenceState reference;
  BoundaryData data;
  TimeGrid grid;
  FixedStressConfig split;
  LineSpec line;
};

std::unique_ptr<BiotProblem> build_problem(const Scenario& sc);

struct SlabLog {
  int slab = 0;
  double t_end = 0.0;
  std::string scheme;
  int iterations = 0;
  double change_p = 0.0;
  double change_u = 0.0;
  double mass_residual = 0.0;
};

struct Snapshot {
  double time = 0.0;
  SlabInit state;
};

struct ScenarioRun {
  std::string label;
  TraceSeries trace;
  std::vector<SlabLog> log;
  std::vector<Snapshot> snapshots;
  SlabInit final_state;
  int unknown_blocks = 0;  ///< largest flow block count over the slabs
  double wall_seconds = 0.0;
  std::exception_ptr error;  ///< set when marching stopped early

  bool ok() const { return !error; }
  std::string error_message() const;
};

/// Marches `grid` on `pb`, recording the line trace at every slab end and the
/// states nearest to the requested snapshot times. Failures are caught and
/// stored in the result together with everything recorded up to that point.
ScenarioRun run_scenario(const BiotProblem& pb, const TimeGrid& grid, const FixedStressConfig& split,
                         const LineSpec& line, const std::string& label,
                         const std::vector<double>& snapshot_times = {});

}  // namespace biot::bench
