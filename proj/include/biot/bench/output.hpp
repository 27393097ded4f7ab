#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "biot/bench/manufactured.hpp"
#include "biot/bench/scenario.hpp"
#include "biot/bench/terzaghi.hpp"

namespace biot::bench {

/// 17 significant digits.
std::string format_double(double v);

void write_trace_csv(std::ostream& os, const TraceSeries& trace);
void write_convergence_log(std::ostream& os, const std::vector<SlabLog>& log);
void write_timing_table(std::ostream& os, const std::vector<TimingRow>& rows);
void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows);
void write_convergence_report(std::ostream& os, const ConvergenceReport& rep);

/// Legacy ASCII structured grid: displacement at mesh vertices, pressure as
/// cell averages.
void write_vtk(std::ostream& os, const BiotProblem& pb, const SlabInit& state, double time);

/// Creates `dir` if needed. Throws ConfigError if any of `files` already
/// exists in it and `force` is false.
void prepare_output(const std::filesystem::path& dir, const std::vector<std::string>& files, bool force);

/// Opens `path` for writing or throws Error.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

}  // namespace biot::bench
