#include "biot/bench/terzaghi.hpp"

#include <cmath>

#include "biot/errors.hpp"

namespace biot::bench {

TerzaghiOptions::TerzaghiOptions() {
  material.lambda = 1.0;
  material.mu = 1.0;
  material.alpha_b = 1.0;
  material.M = 10.0;
  material.K = Vec3::Ones();
  material.eta = 1.0;
  material.phi = 0.3;
  material.rho_f = 0.0;
  material.rho_s = 0.0;
  line.from = Point(0.0, 0.15, 0.25);
  line.to = Point(0.5, 0.15, 0.25);
  line.samples = 101;
}

TerzaghiOptions TerzaghiOptions::paper_order() {
  TerzaghiOptions o;
  o.dim = 2;
  o.order = 2;
  o.extents = {0.5, 1.0};
  o.divisions = {5, 10};
  o.line.from = Point(0.0, 0.15, 0.0);
  o.line.to = Point(0.5, 0.15, 0.0);
  return o;
}

int TerzaghiOptions::slabs() const { return static_cast<int>(std::lround(T / tau)); }

Scenario terzaghi_scenario(const TerzaghiOptions& opt) {
  if (static_cast<int>(opt.extents.size()) != opt.dim || static_cast<int>(opt.divisions.size()) != opt.dim)
    throw InvalidArgument("extents and divisions must have one entry per axis");
  Scenario sc;
  sc.extents = opt.extents;
  sc.divisions = opt.divisions;
  sc.order = opt.order;
  for (int s = 0; s < 2 * opt.dim; ++s) {
    const Side side = static_cast<Side>(s);
    sc.boundary.sides[side] =
        side == Side::YHigh ? BoundarySpec::free(FlowBC::Pressure) : BoundarySpec::roller(side, FlowBC::Flux);
  }
  sc.materials = CellMaterials(opt.material);

  const double p_top = opt.top_pressure;
  const Vec3 t_top = opt.top_traction;
  sc.data.pressure = [p_top](const Point&, double t, Side) { return t > 0.0 ? p_top : 0.0; };
  sc.data.traction = [t_top](const Point&, double t, Side s) {
    return (s == Side::YHigh && t > 0.0) ? t_top : Vec3::Zero().eval();
  };

  sc.grid = TimeGrid::uniform(opt.T, opt.slabs(), TimeScheme::dg(0));
  sc.split = opt.split;
  sc.line = opt.line;
  return sc;
}

const ScenarioRun& BenchmarkResult::run(const std::string& label) const {
  for (const auto& r : runs)
    if (r.label == label) return r;
  throw InvalidArgument("no run labelled " + label);
}

std::vector<std::pair<std::string, TimeGrid>> terzaghi_grids(const TerzaghiOptions& opt) {
  const int N = opt.slabs();
  return {{"dG(0)", TimeGrid::uniform(opt.T, N, TimeScheme::dg(0))},
          {"cG(1)", TimeGrid::uniform(opt.T, N, TimeScheme::cg(1))},
          {"dG(1)", TimeGrid::uniform(opt.T, N, TimeScheme::dg(1))},
          {"dG(1)-cG(1)", TimeGrid::scheme1(opt.T, N)}};
}

BenchmarkResult terzaghi_benchmark(const TerzaghiOptions& opt) {
  const Scenario sc = terzaghi_scenario(opt);
  auto pb = build_problem(sc);
  pb->stiffness_factor();

  BenchmarkResult res;
  for (const auto& [label, grid] : terzaghi_grids(opt)) {
    ScenarioRun run = run_scenario(*pb, grid, sc.split, sc.line, label);
    TimingRow row;
    row.scheme = label;
    row.unknown_blocks = run.unknown_blocks;
    row.slabs = static_cast<int>(run.log.size());
    for (const auto& l : run.log) row.iterations += l.iterations;
    row.wall_seconds = run.wall_seconds;
    row.status = run.ok() ? "ok" : "failed: " + run.error_message();
    res.timing.push_back(row);
    res.runs.push_back(std::move(run));
  }
  return res;
}

}  // namespace biot::bench
