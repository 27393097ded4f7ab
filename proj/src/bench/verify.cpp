#include "biot/bench/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "biot/bench/manufactured.hpp"
#include "biot/bench/monolithic.hpp"
#include "biot/errors.hpp"

namespace biot::bench {

Scenario small_consolidation(int n, int order, double T, int N, const TimeScheme& scheme) {
  Scenario sc;
  sc.extents = {1.0, 1.0};
  sc.divisions = {n, n};
  sc.order = order;
  for (int s = 0; s < 4; ++s) {
    const Side side = static_cast<Side>(s);
    sc.boundary.sides[side] =
        side == Side::YHigh ? BoundarySpec::free(FlowBC::Pressure) : BoundarySpec::roller(side, FlowBC::Flux);
  }
  MaterialParams m;
  m.M = 10.0;
  sc.materials = CellMaterials(m);
  sc.data.pressure = [](const Point& x, double t, Side) { return t > 0.0 ? -5.0 + x[0] : 0.0; };
  sc.data.traction = [](const Point& x, double t, Side s) {
    return (s == Side::YHigh && t > 0.0) ? Vec3(0.1 * x[0], -1.0, 0.0) : Vec3::Zero().eval();
  };
  sc.data.source = [](const Point& x, double t) { return t * x[1]; };
  sc.grid = TimeGrid::uniform(T, N, scheme);
  sc.line.from = Point(0.0, 0.15, 0.0);
  sc.line.to = Point(1.0, 0.15, 0.0);
  return sc;
}

Scenario closed_box(int n, double T, int N) {
  Scenario sc;
  sc.extents = {1.0, 1.0};
  sc.divisions = {n, n};
  sc.order = 1;
  for (int s = 0; s < 4; ++s) sc.boundary.sides[static_cast<Side>(s)] = BoundarySpec::roller(static_cast<Side>(s), FlowBC::Flux);
  MaterialParams m;
  sc.materials = CellMaterials(m);
  const double a = m.alpha_b;
  auto p0 = [](const Point& x) { return 1.0 + std::cos(std::numbers::pi * x[0]) * std::cos(std::numbers::pi * x[1]); };
  sc.reference.p0 = p0;
  sc.reference.sigma0 = [p0, a](const Point& x) {
    Mat3 s = Mat3::Zero();
    s(0, 0) = s(1, 1) = -a * p0(x);
    return s;
  };
  sc.grid = TimeGrid::uniform(T, N, TimeScheme::dg(0));
  sc.line.from = Point(0.0, 0.5, 0.0);
  sc.line.to = Point(1.0, 0.5, 0.0);
  return sc;
}

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult check_time_matrices() {
  CheckResult c{"time matrices", true, ""};
  double worst = 0.0;
  std::vector<TimeScheme> schemes{TimeScheme::dg(0), TimeScheme::dg(1), TimeScheme::dg(2), TimeScheme::cg(1),
                                  TimeScheme::cg(2)};
  const double tau = 0.37;
  for (const auto& s : schemes) {
    const TimeCoupling tc = time_matrices(s, tau);
    worst = std::max(worst, tc.alpha.rowwise().sum().cwiseAbs().maxCoeff());
    if (s.family == TimeFamily::dG) {
      const QuadratureRule g = gauss_legendre(s.order + 1);
      for (int i = 0; i <= s.order; ++i) {
        worst = std::max(worst, std::abs(tc.gamma_plus.row(i).sum() - tc.gamma_minus[i]));
        for (int j = 0; j <= s.order; ++j)
          worst = std::max(worst, std::abs(tc.beta(i, j) - (i == j ? tau * g.weights[i] : 0.0)));
      }
    }
  }
  c.passed = worst <= 1e-13;
  c.detail = "max defect " + sci(worst);
  return c;
}

CheckResult check_quadrature() {
  double worst = 0.0;
  for (int k = 1; k <= 6; ++k) {
    const QuadratureRule g = gauss_legendre(k);
    for (int m = 0; m <= 2 * k - 1; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], m);
      worst = std::max(worst, std::abs(s - 1.0 / (m + 1)));
    }
  }
  return {"gauss exactness", worst <= 1e-14, "max defect " + sci(worst)};
}

CheckResult check_mesh() {
  const double ext[3] = {0.5, 1.0, 0.5};
  const int div[3] = {3, 2, 2};
  const Mesh m = build_box_mesh(ext, div);
  double vol = 0.0;
  for (const auto& c : m.cells()) vol += c.volume;
  bool ok = std::abs(vol - 0.25) <= 1e-12 * 0.25;
  for (const auto& f : m.faces())
    if (!f.is_boundary()) ok = ok && (f.incidence(f.lower_cell) + f.incidence(f.upper_cell) == 0);
  return {"mesh volume and incidence", ok, "volume " + sci(vol)};
}

CheckResult check_flux_continuity() {
  const double ext[2] = {1.0, 2.0};
  const int div[2] = {3, 2};
  const Mesh m = build_box_mesh(ext, div);
  double worst = 0.0;
  for (int k = 0; k <= 1; ++k) {
    const DofMap dq = build_flux_space(m, k);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Vector c(dq.n_dofs());
    for (int i = 0; i < c.size(); ++i) c[i] = U(rng);
    for (const auto& f : m.faces()) {
      if (f.is_boundary()) continue;
      for (double s : {0.1, 0.5, 0.77}) {
        Point x = f.center;
        const int t = 1 - f.axis;
        x[t] += (s - 0.5) * m.spacing(t);
        const double lo = dq.eval_vector(m, f.lower_cell, m.to_reference(f.lower_cell, x), c)[f.axis];
        const double hi = dq.eval_vector(m, f.upper_cell, m.to_reference(f.upper_cell, x), c)[f.axis];
        worst = std::max(worst, std::abs(lo - hi));
      }
    }
  }
  return {"flux normal continuity", worst <= 1e-12, "max jump " + sci(worst)};
}

double sup_diff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, (a[j] - b[j]).cwiseAbs().maxCoeff());
  return d;
}

CheckResult check_monolithic() {
  CheckResult c{"split vs monolithic", true, ""};
  const Scenario sc = small_consolidation(4, 1, 0.1, 1, TimeScheme::dg(0));
  auto pb = build_problem(sc);
  FixedStressConfig cfg;
  cfg.tol = 1e-10;
  cfg.max_iterations = 500;
  FixedStressSolver solver(*pb, cfg);
  const SlabInit init = solver.initial_state();
  for (const auto& s : {TimeScheme::dg(0), TimeScheme::dg(1), TimeScheme::cg(1)}) {
    const SlabSolution split = solver.fixed_stress_slab(0, s, 0.0, 0.01, init);
    const SlabSolution mono = monolithic_oracle(solver, s, 0.0, 0.01, init);
    const double d = std::max({sup_diff(split.u, mono.u), sup_diff(split.q, mono.q), sup_diff(split.p, mono.p)});
    c.passed = c.passed && d <= 1e-8;
    c.detail += s.label() + " " + sci(d) + " ";
  }
  return c;
}

CheckResult check_conservation() {
  Scenario sc = closed_box(4, 1.0, 100);
  sc.split.tol = 1e-11;
  sc.split.max_iterations = 500;
  auto pb = build_problem(sc);
  FixedStressSolver solver(*pb, sc.split);
  const SlabInit s0 = solver.initial_state();
  const double X0 = pb->mass_aggregate(s0.u, s0.p);
  double drift = 0.0;
  march(solver, sc.grid, [&](const SlabSolution&, const SlabInit& end, const MarchRecord&) {
    drift = std::max(drift, std::abs(pb->mass_aggregate(end.u, end.p) - X0));
  });
  const double rel = drift / std::max(1.0, std::abs(X0));
  return {"closed-system mass aggregate", rel <= 1e-8, "relative drift " + sci(rel)};
}

CheckResult check_determinism_and_locality() {
  const Scenario sc = small_consolidation(4, 1, 0.05, 10, TimeScheme::dg(0));
  auto pb = build_problem(sc);
  TimeGrid mixed = sc.grid;
  mixed.schemes[5] = TimeScheme::cg(1);
  const ScenarioRun a = run_scenario(*pb, sc.grid, sc.split, sc.line, "a");
  const ScenarioRun b = run_scenario(*pb, sc.grid, sc.split, sc.line, "b");
  const ScenarioRun m = run_scenario(*pb, mixed, sc.split, sc.line, "m");
  bool same = a.ok() && b.ok() && m.ok() && a.trace.size() == b.trace.size();
  for (std::size_t i = 0; same && i < a.trace.size(); ++i) same = a.trace.records[i].pressure == b.trace.records[i].pressure;
  bool local = same;
  for (std::size_t i = 0; local && i < 5; ++i) local = a.trace.records[i].pressure == m.trace.records[i].pressure;
  return {"determinism and causality", same && local, same ? (local ? "identical" : "earlier slabs changed") : "runs differ"};
}

}  // namespace

std::vector<CheckResult> run_verification(bool full) {
  using Check = CheckResult (*)();
  std::vector<std::pair<std::string, Check>> checks{{"time matrices", check_time_matrices},
                                                    {"gauss exactness", check_quadrature},
                                                    {"mesh volume and incidence", check_mesh},
                                                    {"flux normal continuity", check_flux_continuity},
                                                    {"split vs monolithic", check_monolithic},
                                                    {"closed-system mass aggregate", check_conservation},
                                                    {"determinism and causality", check_determinism_and_locality}};
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  }
  if (full) {
    try {
      for (const auto& rep : manufactured_convergence()) {
        const bool space = rep.study.rfind("space", 0) == 0;
        const double eu = space ? 2.0 : (rep.study.find("dG(0)") != std::string::npos ? 1.0 : 2.0);
        const double ep = space ? 1.0 : eu;
        const bool ok = std::abs(rep.order_u - eu) <= 0.2 && std::abs(rep.order_p - ep) <= 0.2;
        const std::string detail = "u " + sci(rep.order_u) + " p " + sci(rep.order_p);
        out.push_back({"manufactured " + rep.study, ok, detail});
      }
    } catch (const std::exception& e) {
      out.push_back({"manufactured convergence", false, e.what()});
    }
  }
  return out;
}

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks) {
  for (const auto& c : checks) os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
}

}  // namespace biot::bench
