#include "biot/app/run.hpp"

#include <cstdio>

#include "biot/app/config.hpp"
#include "biot/bench/output.hpp"
#include "biot/bench/terzaghi.hpp"
#include "biot/bench/verify.hpp"
#include "biot/errors.hpp"

namespace biot::app {

namespace {

int classify(std::exception_ptr e, std::ostream& err) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError& x) {
    err << "configuration error:\n" << x.what() << '\n';
    return kConfig;
  } catch (const NonConvergenceError& x) {
    err << "non-convergence in slab " << x.slab() << ": " << x.what() << '\n';
    return kNonConvergence;
  } catch (const std::exception& x) {
    err << "solver error: " << x.what() << '\n';
    return kSolver;
  }
}

std::string snapshot_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%03zu.vtk", i);
  return buf;
}

}  // namespace

int run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_config(opt.config);
    if (opt.scheme) set_schemes(cfg, *opt.scheme);
    if (opt.output_dir) cfg.output_dir = *opt.output_dir;
  } catch (...) {
    return classify(std::current_exception(), err);
  }

  try {
    std::vector<std::string> files{"trace.csv", "convergence.log"};
    if (!opt.no_timing) files.insert(files.end(), {"timing.txt", "timing.csv"});
    for (std::size_t i = 0; i < cfg.snapshots.size(); ++i) files.push_back(snapshot_name(i));
    bench::prepare_output(cfg.output_dir, files, opt.force);

    const bench::Scenario& sc = cfg.scenario;
    auto pb = bench::build_problem(sc);
    bench::ScenarioRun result = bench::run_scenario(*pb, sc.grid, sc.split, sc.line, cfg.schemes, cfg.snapshots);
    if (opt.no_timing)
      for (auto& r : result.trace.records) r.wall_seconds = 0.0;

    const auto& dir = cfg.output_dir;
    bench::write_file(dir / "trace.csv", [&](std::ostream& os) { bench::write_trace_csv(os, result.trace); });
    bench::write_file(dir / "convergence.log", [&](std::ostream& os) { bench::write_convergence_log(os, result.log); });
    for (std::size_t i = 0; i < result.snapshots.size(); ++i)
      bench::write_file(dir / snapshot_name(i), [&](std::ostream& os) {
        bench::write_vtk(os, *pb, result.snapshots[i].state, result.snapshots[i].time);
      });
    if (!opt.no_timing) {
      bench::TimingRow row;
      row.scheme = cfg.schemes;
      row.unknown_blocks = result.unknown_blocks;
      row.slabs = static_cast<int>(result.log.size());
      for (const auto& l : result.log) row.iterations += l.iterations;
      row.wall_seconds = result.wall_seconds;
      row.status = result.ok() ? "ok" : "failed";
      bench::write_file(dir / "timing.txt", [&](std::ostream& os) { bench::write_timing_table(os, {row}); });
      bench::write_file(dir / "timing.csv", [&](std::ostream& os) { bench::write_timing_csv(os, {row}); });
    }
    out << "wrote " << result.trace.size() << " slabs to " << dir.string() << '\n';
    if (!result.ok()) return classify(result.error, err);
    return kOk;
  } catch (...) {
    return classify(std::current_exception(), err);
  }
}

int bench_terzaghi(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const bench::TerzaghiOptions to = opt.paper_order ? bench::TerzaghiOptions::paper_order() : bench::TerzaghiOptions();
    std::vector<std::string> files{"timing.txt", "timing.csv"};
    const std::vector<std::string> stems{"dg0", "cg1", "dg1", "scheme1"};
    for (const auto& s : stems) files.push_back("trace_" + s + ".csv");
    bench::prepare_output(opt.output_dir, files, opt.force);

    const bench::BenchmarkResult res = bench::terzaghi_benchmark(to);
    for (std::size_t i = 0; i < res.runs.size(); ++i)
      bench::write_file(opt.output_dir / ("trace_" + stems[i] + ".csv"),
                        [&](std::ostream& os) { bench::write_trace_csv(os, res.runs[i].trace); });
    bench::write_file(opt.output_dir / "timing.txt", [&](std::ostream& os) { bench::write_timing_table(os, res.timing); });
    bench::write_file(opt.output_dir / "timing.csv", [&](std::ostream& os) { bench::write_timing_csv(os, res.timing); });

    bench::write_timing_table(out, res.timing);
    bool all_ok = true;
    for (const auto& r : res.runs) all_ok = all_ok && r.ok();
    if (all_ok) {
      const auto& dg0 = res.run("dG(0)").trace;
      const std::size_t k = std::min<std::size_t>(50, dg0.size());
      const double tv0 = bench::oscillation_metric(dg0, k);
      out << "TV over first " << k << " slab ends:";
      for (const auto& r : res.runs) out << "  " << r.label << " " << bench::format_double(bench::oscillation_metric(r.trace, k));
      out << "\nTV ratio cG(1)/dG(0): " << bench::format_double(bench::oscillation_metric(res.run("cG(1)").trace, k) / tv0)
          << "\nrelative L2 difference dG(1)-cG(1) vs dG(0) on (0,0.1]: "
          << bench::format_double(bench::relative_l2_difference(res.run("dG(1)-cG(1)").trace, dg0, 0.1)) << '\n';
      return kOk;
    }
    for (const auto& r : res.runs)
      if (!r.ok()) err << r.label << ": " << r.error_message() << '\n';
    return kNonConvergence;
  } catch (...) {
    return classify(std::current_exception(), err);
  }
}

int verify(bool full, std::ostream& out) {
  const auto checks = bench::run_verification(full);
  bench::print_checks(out, checks);
  for (const auto& c : checks)
    if (!c.passed) return kCheckFailed;
  return kOk;
}

}  // namespace biot::app
