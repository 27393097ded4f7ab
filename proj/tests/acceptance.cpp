// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [--only k] [--expect-fail k]...
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "biot/bench/manufactured.hpp"
#include "biot/bench/monolithic.hpp"
#include "biot/bench/terzaghi.hpp"
#include "biot/bench/verify.hpp"
#include "biot/errors.hpp"
#include "oracles.hpp"

using namespace biot;
using namespace biot::bench;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double rel_inf(const Vector& a, const Vector& b) {
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(1.0, b.lpNorm<Eigen::Infinity>());
}

Outcome backward_euler() {
  const auto sc = small_consolidation(2, 1, 0.1, 10, TimeScheme::dg(0));
  const auto pb = build_problem(sc);
  FixedStressConfig cfg;
  cfg.tol = 1e-10;
  const FixedStressSolver solver(*pb, cfg);
  const Trajectory tr = march(solver, sc.grid, {}, true);
  const auto ref = oracle::implicit_euler_fixed_stress(*pb, 0.1, 10, cfg.tol, cfg.max_iterations);
  double worst = 0.0;
  for (std::size_t n = 0; n < ref.size(); ++n)
    worst = std::max({worst, rel_inf(tr.ends[n].u, ref[n].u), rel_inf(tr.ends[n].q, ref[n].q),
                      rel_inf(tr.ends[n].p, ref[n].p)});
  return {tr.ends.size() == 10 && worst <= 1e-12, fmt("10 slabs, max coefficient difference %.3e", worst)};
}

Outcome split_vs_monolithic() {
  double worst = 0.0;
  for (auto s : {TimeScheme::dg(0), TimeScheme::dg(1), TimeScheme::cg(1)}) {
    const auto sc = small_consolidation(4, 1, 0.05, 5, s);
    const auto pb = build_problem(sc);
    FixedStressConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iterations = 500;
    const FixedStressSolver solver(*pb, cfg);
    SlabInit init = solver.initial_state();
    for (int n = 0; n < sc.grid.n_slabs(); ++n) {
      const SlabSolution a = solver.fixed_stress_slab(n, s, sc.grid.bounds[n], sc.grid.tau(n), init);
      const SlabSolution b = monolithic_oracle(solver, s, sc.grid.bounds[n], sc.grid.tau(n), init);
      for (std::size_t j = 0; j < a.u.size(); ++j)
        worst = std::max({worst, (a.u[j] - b.u[j]).lpNorm<Eigen::Infinity>(),
                          (a.q[j] - b.q[j]).lpNorm<Eigen::Infinity>(), (a.p[j] - b.p[j]).lpNorm<Eigen::Infinity>()});
      init = transfer_state(a);
    }
  }
  return {worst <= 1e-8, fmt("dG(0), dG(1), cG(1) on 4x4, 5 slabs each: max sup-norm difference %.3e", worst)};
}

Outcome time_matrices_check() {
  const double tau = 0.0173;
  double worst = 0.0;
  for (int r = 0; r <= 2; ++r) {
    const TimeCoupling tc = time_matrices(TimeScheme::dg(r), tau);
    const oracle::Rule g = oracle::golub_welsch(r + 1);
    worst = std::max(worst, tc.alpha.rowwise().sum().cwiseAbs().maxCoeff());
    for (int i = 0; i <= r; ++i) {
      worst = std::max(worst, std::abs(tc.gamma_plus.row(i).sum() - tc.gamma_minus[i]));
      for (int j = 0; j <= r; ++j) worst = std::max(worst, std::abs(tc.beta(i, j) - (i == j ? tau * g.w[i] : 0.0)));
    }
  }
  for (int q = 1; q <= 2; ++q)
    worst = std::max(worst, time_matrices(TimeScheme::cg(q), tau).alpha.rowwise().sum().cwiseAbs().maxCoeff());
  const TimeCoupling c1 = time_matrices(TimeScheme::cg(1), tau);
  DenseMatrix a(1, 2), b(1, 2);
  a << -2.0, 2.0;
  b << 0.0, tau;
  worst = std::max({worst, (c1.alpha - a).cwiseAbs().maxCoeff(), (c1.beta - b).cwiseAbs().maxCoeff()});
  return {worst <= 1e-13, fmt("r in {0,1,2}, q in {1,2}: max defect %.3e", worst)};
}

Outcome assembly_oracle() {
  double worst = 0.0;
  struct Case {
    int dim, p;
  };
  auto rel = [](const SparseMatrix& a, const DenseMatrix& b) {
    const DenseMatrix A(a);
    return (A - b).cwiseAbs().maxCoeff() / std::max(A.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  };
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(0.3, 2.0);
  for (const Case c : {Case{2, 1}, Case{2, 2}, Case{3, 1}}) {
    std::vector<double> ext;
    std::vector<int> div;
    for (int a = 0; a < c.dim; ++a) {
      ext.push_back(U(rng));
      div.push_back(a == 0 ? 2 : 1);
    }
    BoundarySpec s;
    for (int i = 0; i < 2 * c.dim; ++i) {
      const Side side = static_cast<Side>(i);
      s.sides[side] = i == 0 ? BoundarySpec::clamped(FlowBC::Flux) : BoundarySpec::roller(side, FlowBC::Pressure);
    }
    MaterialParams m;
    m.lambda = U(rng);
    m.mu = U(rng);
    m.alpha_b = U(rng) / 2.0;
    m.M = U(rng);
    m.K = Vec3(U(rng), U(rng), U(rng));
    m.eta = U(rng);
    CellMaterials cm(m);
    m.lambda = U(rng);
    m.mu = U(rng);
    m.K = Vec3(U(rng), U(rng), U(rng));
    cm.set(1, m);
    const BiotProblem pb(tag_boundaries(build_box_mesh(ext, div), s), c.p, cm, ReferenceState{}, BoundaryData{});
    const auto o = oracle::assemble(pb);
    const auto& ops = pb.ops();
    worst = std::max({worst, rel(ops.A_raw, o.A), rel(ops.E, o.E), rel(ops.B, o.B), rel(ops.Mq_raw, o.Mq),
                      rel(ops.Mp, o.Mp), rel(ops.Mp_inv, o.Mp_inv)});
  }
  return {worst <= 1e-12, fmt("d=2 p=1,2 and d=3 p=1: max relative entry difference %.3e", worst)};
}

Outcome manufactured() {
  const auto reps = manufactured_convergence();
  const double target_u[3] = {2.0, 1.0, 2.0}, target_p[3] = {1.0, 1.0, 2.0};
  bool ok = reps.size() == 3;
  std::ostringstream os;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    ok = ok && std::abs(reps[i].order_u - target_u[i]) <= 0.2 && std::abs(reps[i].order_p - target_p[i]) <= 0.2;
    os << (i ? "; " : "") << reps[i].study << fmt(" u %.3f p %.3f", reps[i].order_u, reps[i].order_p);
  }
  return {ok, os.str()};
}

struct BenchData {
  BenchmarkResult res;
  double best_wall[4] = {0, 0, 0, 0};
  int repeats = 0;
};

const BenchData& bench_data() {
  static const BenchData d = [] {
    BenchData b;
    const TerzaghiOptions opt;
    b.res = terzaghi_benchmark(opt);
    for (int i = 0; i < 4; ++i) b.best_wall[i] = b.res.timing[i].wall_seconds;
    b.repeats = 1;
    for (int rep = 0; rep < 2; ++rep) {
      const BenchmarkResult again = terzaghi_benchmark(opt);
      for (int i = 0; i < 4; ++i) b.best_wall[i] = std::min(b.best_wall[i], again.timing[i].wall_seconds);
      ++b.repeats;
    }
    return b;
  }();
  return d;
}

bool all_ok(const BenchmarkResult& r, std::string& why) {
  for (const auto& run : r.runs)
    if (!run.ok()) {
      why = run.label + " failed: " + run.error_message();
      return false;
    }
  return true;
}

Outcome stability() {
  const auto& r = bench_data().res;
  std::string why;
  if (!all_ok(r, why)) return {false, why};
  const auto& dg0 = r.run("dG(0)").trace;
  const double tv0 = oscillation_metric(dg0, 50);
  const double tvc = oscillation_metric(r.run("cG(1)").trace, 50);
  const double tvs = oscillation_metric(r.run("dG(1)-cG(1)").trace, 50);
  const double l2 = relative_l2_difference(r.run("dG(1)-cG(1)").trace, dg0, 0.1);
  const bool ok = tvc >= 5.0 * tv0 && tvs <= 1.5 * tv0 && l2 <= 0.05;
  return {ok, fmt("TV dG(0) %.4g, cG(1) %.4g (x%.1f), dG(1)-cG(1) %.4g (x%.2f); L2 diff %.3e", tv0, tvc, tvc / tv0,
                  tvs, tvs / tv0, l2)};
}

Outcome mandel_cryer() {
  const auto& r = bench_data().res;
  std::string why;
  if (!all_ok(r, why)) return {false, why};
  const auto& recs = r.run("dG(0)").trace.records;
  std::size_t k = 0;
  for (std::size_t i = 1; i < recs.size(); ++i)
    if (std::abs(recs[i].pressure) > std::abs(recs[k].pressure)) k = i;
  const double t1 = recs.front().time;
  bool monotone = true;
  for (std::size_t i = k + 1; i < recs.size(); ++i)
    monotone = monotone && std::abs(recs[i].pressure) <= std::abs(recs[i - 1].pressure) + 1e-8;
  // the peak has to be interior: a maximum at the last record is no overshoot
  const bool ok = recs[k].time > t1 && k + 1 < recs.size() && monotone;
  return {ok, fmt("peak |p| %.6f at t=%.4f (t1=%.4f, slab %zu of %zu), p(t1)=%.6f, p(T)=%.6f, decay after peak: %s",
                  std::abs(recs[k].pressure), recs[k].time, t1, k + 1, recs.size(), recs.front().pressure,
                  recs.back().pressure, monotone ? "yes" : "no")};
}

Outcome cost_ordering() {
  const BenchData& b = bench_data();
  std::string why;
  if (!all_ok(b.res, why)) return {false, why};
  // runs: dG(0), cG(1), dG(1), dG(1)-cG(1)
  const double w0 = b.best_wall[0], w1 = b.best_wall[2], ws = b.best_wall[3];
  const auto& t = b.res.timing;
  const bool blocks = t[0].unknown_blocks == 1 && t[1].unknown_blocks == 1 && t[2].unknown_blocks == 2;
  const bool ok = blocks && w0 <= ws && ws <= w1;
  return {ok, fmt("best of %d: dG(0) %.3fs <= dG(1)-cG(1) %.3fs <= dG(1) %.3fs; blocks %d/%d/%d", b.repeats, w0, ws, w1,
                  t[0].unknown_blocks, t[1].unknown_blocks, t[2].unknown_blocks)};
}

Outcome robustness() {
  const auto& r = bench_data().res;
  std::string why;
  if (!all_ok(r, why)) return {false, why};
  int worst = 0;
  for (const auto& run : r.runs)
    for (const auto& l : run.log) worst = std::max(worst, l.iterations);
  bool ok = worst <= 20;

  TerzaghiOptions opt;
  opt.split.K_dr_star = 0.5 * opt.material.mu;
  const Scenario sc = terzaghi_scenario(opt);
  const auto pb = build_problem(sc);
  const ScenarioRun soft = run_scenario(*pb, sc.grid, sc.split, sc.line, "dG(0) soft");
  std::string soft_detail;
  if (soft.ok()) {
    int it = 0;
    double res = 0.0;
    for (const auto& l : soft.log) {
      it = std::max(it, l.iterations);
      res = std::max(res, l.mass_residual);
    }
    // Each slab stops within tol (relative sup norm) of its fixed point and dG(0)
    // does not amplify perturbations, so two runs at the same tol may differ by
    // at most 2 N tol max(1,|p|) along the trace.
    const auto& ref = r.run("dG(0)").trace.records;
    double diff = 0.0, pmax = 1.0;
    for (std::size_t i = 0; i < ref.size() && i < soft.trace.size(); ++i) {
      diff = std::max(diff, std::abs(soft.trace.records[i].pressure - ref[i].pressure));
      pmax = std::max(pmax, std::abs(ref[i].pressure));
    }
    const double bound = 2.0 * sc.grid.n_slabs() * sc.split.tol * pmax;
    const bool agree = soft.trace.size() == ref.size() && diff <= bound &&
                       res <= sc.split.residual_factor * sc.split.tol;
    ok = ok && agree;
    soft_detail = fmt("converged, max %d iterations, max mass residual %.2e, max trace difference %.2e (bound %.2e)",
                      it, res, diff, bound);
  } else {
    bool designated = false;
    try {
      std::rethrow_exception(soft.error);
    } catch (const NonConvergenceError&) {
      designated = true;
    } catch (...) {
    }
    ok = ok && designated;
    soft_detail = std::string(designated ? "NonConvergenceError: " : "unexpected error: ") + soft.error_message();
  }
  return {ok, fmt("K*=lambda+2mu: max %d iterations per slab; K*=mu/2: ", worst) + soft_detail};
}

Outcome conservation() {
  const Scenario sc = closed_box(4, 1.0, 100);
  const auto pb = build_problem(sc);
  FixedStressConfig cfg;
  cfg.tol = 1e-11;
  cfg.max_iterations = 500;
  const FixedStressSolver solver(*pb, cfg);
  const double m0 = pb->mass_aggregate(pb->ops().U0, pb->ops().P0);
  double drift = 0.0;
  march(solver, sc.grid, [&](const SlabSolution&, const SlabInit& end, const MarchRecord&) {
    drift = std::max(drift, std::abs(pb->mass_aggregate(end.u, end.p) - m0) / std::abs(m0));
  });
  return {drift <= 1e-8, fmt("100 dG(0) slabs, max relative drift %.3e", drift)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_fail, only;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--expect-fail") && i + 1 < argc)
      expect_fail.insert(std::atoi(argv[++i]));
    else if (!std::strcmp(argv[i], "--only") && i + 1 < argc)
      only.insert(std::atoi(argv[++i]));
    else {
      std::fprintf(stderr, "usage: acceptance [--only k] [--expect-fail k]...\n");
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"backward-Euler equivalence", backward_euler},
      {"split-monolithic agreement", split_vs_monolithic},
      {"temporal-matrix identities", time_matrices_check},
      {"assembly oracle", assembly_oracle},
      {"manufactured convergence", manufactured},
      {"stability reproduction", stability},
      {"Mandel-Cryer overshoot", mandel_cryer},
      {"cost ordering", cost_ordering},
      {"fixed-stress robustness", robustness},
      {"conservation", conservation},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool xf = expect_fail.count(id) > 0;
    std::printf("%s %2d %-28s %s (%.2fs)%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str(), secs, xf ? (o.pass ? " [unexpected pass]" : " [expected failure]") : "");
    std::fflush(stdout);
    if (o.pass == xf) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
