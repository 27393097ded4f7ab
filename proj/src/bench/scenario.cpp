#include "biot/bench/scenario.hpp"

#include <algorithm>
#include <chrono>

#include "biot/errors.hpp"

namespace biot::bench {

std::unique_ptr<BiotProblem> build_problem(const Scenario& sc) {
  Mesh mesh = tag_boundaries(build_box_mesh(sc.extents, sc.divisions), sc.boundary);
  return std::make_unique<BiotProblem>(std::move(mesh), sc.order, sc.materials, sc.reference, sc.data);
}

std::string ScenarioRun::error_message() const {
  if (!error) return {};
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

ScenarioRun run_scenario(const BiotProblem& pb, const TimeGrid& grid, const FixedStressConfig& split,
                         const LineSpec& line, const std::string& label, const std::vector<double>& snapshot_times) {
  ScenarioRun run;
  run.label = label;
  run.trace.label = label;
  for (const auto& s : grid.schemes) run.unknown_blocks = std::max(run.unknown_blocks, s.unknown_blocks());

  std::vector<double> pending = snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next = 0;

  const auto t_start = std::chrono::steady_clock::now();
  try {
    FixedStressSolver solver(pb, split);
    const SlabInit start = solver.initial_state();
    const double eps = 1e-9 * grid.T;
    for (; next < pending.size() && pending[next] <= eps; ++next) run.snapshots.push_back({0.0, start});

    auto observe = [&](const SlabSolution& sol, const SlabInit& end, const MarchRecord& rec) {
      TraceRecord r;
      r.time = rec.t_end;
      r.pressure = line_average_pressure(pb.mesh(), pb.dp(), end.p, line);
      r.iterations = sol.iterations;
      r.wall_seconds = rec.wall_seconds;
      run.trace.records.push_back(r);

      SlabLog lg;
      lg.slab = rec.slab;
      lg.t_end = rec.t_end;
      lg.scheme = sol.scheme.label();
      lg.iterations = sol.iterations;
      lg.change_p = sol.change_p.empty() ? 0.0 : sol.change_p.back();
      lg.change_u = sol.change_u.empty() ? 0.0 : sol.change_u.back();
      lg.mass_residual = sol.mass_residual;
      run.log.push_back(lg);

      for (; next < pending.size() && pending[next] <= rec.t_end + eps; ++next) run.snapshots.push_back({rec.t_end, end});
    };
    run.final_state = march(solver, grid, observe, false, start).final_state;
  } catch (const Error&) {
    run.error = std::current_exception();
  }
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return run;
}

}  // namespace biot::bench
