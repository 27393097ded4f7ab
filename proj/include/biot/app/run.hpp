#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace biot::app {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfig = 2, kNonConvergence = 3, kSolver = 4 };

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::string> scheme;
  std::optional<std::filesystem::path> output_dir;
  bool force = false;
  /// Writes zeros in the wall_seconds column and skips the timing report, so
  /// repeated runs produce byte-identical files.
  bool no_timing = false;
};

/// Parses the config, marches it and writes trace.csv, convergence.log,
/// timing.txt/timing.csv and snapshot_<i>.vtk into the output directory.
int run(const RunOptions& opt, std::ostream& out, std::ostream& err);

struct BenchOptions {
  bool paper_order = false;
  std::filesystem::path output_dir = "bench_terzaghi";
  bool force = false;
};

/// Four-scheme consolidation benchmark with traces, timing and metrics.
int bench_terzaghi(const BenchOptions& opt, std::ostream& out, std::ostream& err);

int verify(bool full, std::ostream& out);

}  // namespace biot::app
