#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "biot/bench/manufactured.hpp"
#include "biot/bench/monolithic.hpp"
#include "biot/bench/output.hpp"
#include "biot/bench/terzaghi.hpp"
#include "biot/bench/verify.hpp"
#include "biot/errors.hpp"

using namespace biot;
using namespace biot::bench;

namespace {

TraceSeries series(std::vector<double> p) {
  TraceSeries s;
  for (std::size_t i = 0; i < p.size(); ++i) s.records.push_back({0.1 * (i + 1), p[i], 1, 0.0});
  return s;
}

}  // namespace

TEST_CASE("line averages") {
  const double e[2] = {1.0, 1.0};
  const int n[2] = {4, 4};
  const Mesh mesh = build_box_mesh(e, n);
  LineSpec line;
  line.from = Point(0.0, 0.15, 0.0);
  line.to = Point(1.0, 0.15, 0.0);

  const DofMap d0 = build_pressure_space(mesh, 0);
  Vector c = Vector::Constant(d0.n_dofs(), -3.0);
  CHECK(line_average_pressure(mesh, d0, c, line) == doctest::Approx(-3.0));

  // piecewise constant: each sample takes the value of the column it falls in,
  // samples on an interior edge belong to the lower column
  for (int cell = 0; cell < mesh.n_cells(); ++cell) c[cell] = cell * cell + 1.0;
  double expect = 0.0;
  for (int k = 0; k < 101; ++k) {
    const int col = static_cast<int>(std::ceil(4.0 * (k + 0.5) / 101.0)) - 1;
    expect += col * col + 1.0;
  }
  CHECK(line_average_pressure(mesh, d0, c, line) == doctest::Approx(expect / 101.0));

  const DofMap d1 = build_pressure_space(mesh, 1);
  Vector lin(d1.n_dofs());
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const auto dofs = d1.cell_dofs(cell);
    for (int i = 0; i < 4; ++i) {
      const Point x = mesh.to_physical(cell, d1.scalar_element().node(i));
      lin[dofs[i]] = 2.0 * x[0] + x[1];
    }
  }
  CHECK(line_average_pressure(mesh, d1, lin, line) == doctest::Approx(1.15));

  line.to = Point(1.5, 0.15, 0.0);
  CHECK_THROWS_AS(line_average_pressure(mesh, d1, lin, line), InvalidArgument);
}

TEST_CASE("trace metrics") {
  const TraceSeries t = series({0.0, 1.0, -1.0, 2.0});
  CHECK(oscillation_metric(t, 4) == doctest::Approx(6.0));
  CHECK(oscillation_metric(t, 2) == doctest::Approx(1.0));
  CHECK(oscillation_metric(t, 1) == 0.0);
  CHECK_THROWS_AS(oscillation_metric(t, 5), InvalidArgument);
  const TraceSeries b = series({1.0, 2.0, 3.0, 4.0});
  const TraceSeries a = series({1.1, 2.2, 3.3, 4.4});
  CHECK(relative_l2_difference(a, b, 1.0) == doctest::Approx(0.1));
  const TraceSeries c = series({1.1, 2.2, 0.0, 0.0});
  CHECK(relative_l2_difference(c, b, 0.2) == doctest::Approx(0.1));
}

TEST_CASE("csv and vtk output") {
  TraceSeries s = series({-4.25, 1.0 / 3.0});
  std::ostringstream os;
  write_trace_csv(os, s);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "time,pressure_line_avg,iterations,wall_seconds");
  int rows = 0;
  while (std::getline(is, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    REQUIRE(f.size() == 4);
    CHECK(std::stod(f[1]) == s.records[rows].pressure);
    CHECK(std::stod(f[0]) == s.records[rows].time);
    ++rows;
  }
  CHECK(rows == 2);

  const auto sc = small_consolidation(3, 1, 0.1, 1, TimeScheme::dg(0));
  const auto pb = build_problem(sc);
  const FixedStressSolver solver(*pb, FixedStressConfig{});
  std::ostringstream vtk;
  write_vtk(vtk, *pb, solver.initial_state(), 0.0);
  const std::string v = vtk.str();
  CHECK(v.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(v.find("DIMENSIONS 4 4 1") != std::string::npos);
  CHECK(v.find("POINTS 16") != std::string::npos);
  CHECK(v.find("POINT_DATA 16") != std::string::npos);
  CHECK(v.find("CELL_DATA 9") != std::string::npos);
}

TEST_CASE("output directory guard") {
  const auto dir = std::filesystem::temp_directory_path() / "biot_test_guard";
  std::filesystem::remove_all(dir);
  prepare_output(dir, {"a.csv"}, false);
  write_file(dir / "a.csv", [](std::ostream& os) { os << "x\n"; });
  CHECK_THROWS_AS(prepare_output(dir, {"a.csv"}, false), ConfigError);
  CHECK_NOTHROW(prepare_output(dir, {"a.csv"}, true));
  CHECK_NOTHROW(prepare_output(dir, {"b.csv"}, false));
  std::filesystem::remove_all(dir);
}

TEST_CASE("manufactured solution") {
  const TrigSolution s = TrigSolution::smooth_in_time();
  // the source balances the mass equation: check with finite differences
  const Point x(0.3, 0.7, 0.0);
  const double t = 0.2, h = 1e-5;
  const auto& m = s.material;
  double div_u_t = 0.0, div_q = 0.0;
  for (int a = 0; a < 2; ++a) {
    Point xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    div_u_t += ((s.u(xp, t + h) - s.u(xm, t + h))[a] - (s.u(xp, t - h) - s.u(xm, t - h))[a]) / (4 * h * h);
    div_q += (s.q(xp, t)[a] - s.q(xm, t)[a]) / (2 * h);
  }
  const double p_t = (s.p(x, t + h) - s.p(x, t - h)) / (2 * h);
  CHECK(m.alpha_b * div_u_t + p_t / m.M + div_q == doctest::Approx(s.source(x, t)).epsilon(1e-5));

  FixedStressConfig cfg;
  cfg.tol = 1e-11;
  cfg.max_iterations = 200;
  const ConvergenceReport r =
      spatial_convergence(TrigSolution::linear_in_time(), {4, 8, 16}, TimeScheme::dg(1), 0.25, 5, cfg);
  CHECK(r.order_u > 1.8);
  CHECK(r.order_p > 0.9);
  CHECK(fitted_order({1.0, 0.5, 0.25}, {4.0, 1.0, 0.25}) == doctest::Approx(2.0));
}

TEST_CASE("monolithic oracle refuses large systems") {
  const auto sc = small_consolidation(20, 1, 0.1, 1, TimeScheme::dg(2));
  const auto pb = build_problem(sc);
  const FixedStressSolver solver(*pb, FixedStressConfig{});
  CHECK_THROWS_AS(monolithic_oracle(solver, TimeScheme::dg(2), 0.0, 0.1, solver.initial_state()), InvalidArgument);
}

TEST_CASE("consolidation benchmark setup") {
  const TerzaghiOptions d;
  CHECK(d.slabs() == 500);
  CHECK(d.dim == 3);
  const TerzaghiOptions po = TerzaghiOptions::paper_order();
  CHECK(po.dim == 2);
  CHECK(po.order == 2);

  TerzaghiOptions o;
  o.dim = 2;
  o.extents = {0.5, 1.0};
  o.divisions = {2, 8};
  o.T = 0.05;
  o.tau = 0.01;
  o.line.from = Point(0.0, 0.15, 0.0);
  o.line.to = Point(0.5, 0.15, 0.0);
  const auto grids = terzaghi_grids(o);
  REQUIRE(grids.size() == 4);
  CHECK(grids[3].second.schemes[0] == TimeScheme::dg(1));
  const BenchmarkResult res = terzaghi_benchmark(o);
  for (const auto& r : res.runs) {
    CHECK(r.ok());
    CHECK(r.trace.size() == 5);
    CHECK(r.trace.records.back().pressure > -5.0);
  }
  // compression raises the pore pressure, drainage to -5 at the top then lowers it
  const auto& d0 = res.run("dG(0)").trace.records;
  CHECK(d0.front().pressure > 0.0);
  CHECK(d0.back().pressure < d0.front().pressure);
  CHECK(res.timing.size() == 4);
  CHECK_THROWS(res.run("nope"));
}

TEST_CASE("verification checks pass") {
  for (const auto& c : run_verification(false)) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
}
