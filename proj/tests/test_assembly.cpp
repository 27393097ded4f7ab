#include <doctest.h>

#include <random>

#include "biot/assembly.hpp"
#include "biot/problem.hpp"
#include "oracles.hpp"

using namespace biot;

namespace {

double rel_diff(const SparseMatrix& a, const DenseMatrix& b) {
  const DenseMatrix A(a);
  const double scale = std::max(A.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (A - b).cwiseAbs().maxCoeff() / scale;
}

std::unique_ptr<BiotProblem> random_two_cell(int dim, int p, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(0.3, 2.0);
  std::vector<double> ext;
  std::vector<int> div;
  for (int a = 0; a < dim; ++a) {
    ext.push_back(U(rng));
    div.push_back(a == static_cast<int>(seed % dim) ? 2 : 1);
  }
  BoundarySpec s;
  for (int i = 0; i < 2 * dim; ++i) s.sides[static_cast<Side>(i)] = BoundarySpec::clamped(FlowBC::Pressure);
  MaterialParams m;
  m.lambda = U(rng);
  m.mu = U(rng);
  m.alpha_b = 0.5 * U(rng) / 2.0;
  m.M = U(rng);
  m.K = Vec3(U(rng), U(rng), U(rng));
  m.eta = U(rng);
  CellMaterials cm(m);
  MaterialParams m2 = m;
  m2.lambda = U(rng);
  m2.mu = U(rng);
  m2.K = Vec3(U(rng), U(rng), U(rng));
  cm.set(1, m2);
  return std::make_unique<BiotProblem>(tag_boundaries(build_box_mesh(ext, div), s), p, cm, ReferenceState{},
                                       BoundaryData{});
}

}  // namespace

TEST_CASE("matrices match the double-order quadrature oracle") {
  struct Case {
    int dim, p;
  };
  for (const Case c : {Case{2, 1}, Case{2, 2}, Case{3, 1}})
    for (unsigned seed : {1u, 2u, 3u}) {
      CAPTURE(c.dim);
      CAPTURE(c.p);
      const auto pb = random_two_cell(c.dim, c.p, seed);
      const auto o = oracle::assemble(*pb);
      const auto& ops = pb->ops();
      CHECK(rel_diff(ops.A_raw, o.A) <= 1e-12);
      CHECK(rel_diff(ops.E, o.E) <= 1e-12);
      CHECK(rel_diff(ops.B, o.B) <= 1e-12);
      CHECK(rel_diff(ops.Mq_raw, o.Mq) <= 1e-12);
      CHECK(rel_diff(ops.Mp, o.Mp) <= 1e-12);
      CHECK(rel_diff(ops.Mp_inv, o.Mp_inv) <= 1e-12);
    }
}

TEST_CASE("structural properties") {
  const auto pb = random_two_cell(2, 2, 7);
  const auto& ops = pb->ops();
  const DenseMatrix A(ops.A_raw);
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * A.cwiseAbs().maxCoeff());
  // rigid translations lie in the kernel; so does a rotation
  const auto& du = pb->du();
  Vector tx = Vector::Zero(du.n_dofs()), rot = Vector::Zero(du.n_dofs());
  for (int dof = 0; dof < du.n_dofs(); ++dof) {
    const Point x = du.support_point(dof);
    tx[dof] = dof % 2 == 0 ? 1.0 : 0.0;
    rot[dof] = dof % 2 == 0 ? -x[1] : x[0];
  }
  CHECK((A * tx).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((A * rot).cwiseAbs().maxCoeff() < 1e-12);
  // E^T of a translation vanishes
  CHECK((DenseMatrix(ops.E).transpose() * tx).cwiseAbs().maxCoeff() < 1e-13);
  const DenseMatrix I = DenseMatrix(ops.Mp_inv) * DenseMatrix(ops.Mp);
  CHECK((I - DenseMatrix::Identity(I.rows(), I.cols())).cwiseAbs().maxCoeff() < 1e-12);
  const DenseMatrix Mq(ops.Mq_raw);
  CHECK((Mq - Mq.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("symmetric elimination") {
  SparseMatrix A(3, 3);
  std::vector<Triplet> t{{0, 0, 2}, {0, 1, -1}, {1, 0, -1}, {1, 1, 2}, {1, 2, -1}, {2, 1, -1}, {2, 2, 2}};
  A.setFromTriplets(t.begin(), t.end());
  const DenseMatrix D(apply_dirichlet(A, {0, 1, 0}));
  DenseMatrix expect(3, 3);
  expect << 2, 0, 0, 0, 1, 0, 0, 0, 2;
  CHECK((D - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("load vector totals") {
  const double e[2] = {2.0, 1.0};
  const int n[2] = {4, 3};
  BoundarySpec s;
  for (int i = 0; i < 4; ++i) {
    const Side side = static_cast<Side>(i);
    s.sides[side] = side == Side::YHigh ? BoundarySpec::free(FlowBC::Pressure) : BoundarySpec::roller(side, FlowBC::Flux);
  }
  const Mesh mesh = tag_boundaries(build_box_mesh(e, n), s);
  MaterialParams m;
  m.rho_f = 1.0;
  m.rho_s = 2.0;
  m.phi = 0.25;
  const CellMaterials cm(m);
  BoundaryData data;
  data.pressure = [](const Point&, double t, Side) { return 3.0 * t; };
  data.traction = [](const Point&, double, Side side) {
    return side == Side::YHigh ? Vec3(0.5, -1.0, 0.0) : Vec3(0.0, 0.0, 0.0);
  };
  data.gravity = [](const Point&, double) { return Vec3(0.0, -10.0, 0.0); };
  data.source = [](const Point&, double) { return 0.25; };
  for (int p : {1, 2}) {
    const DofMap du = build_displacement_space(mesh, p);
    const DofMap dq = build_flux_space(mesh, p - 1);
    const DofMap dp = build_pressure_space(mesh, p - 1);
    const LoadVectors L = assemble_loads(mesh, du, dq, dp, cm, data, 2.0);
    double fy = 0, gy = 0;
    for (int dof = 1; dof < du.n_dofs(); dof += 2) {
      fy += L.TN[dof];
      gy += L.Gb[dof];
    }
    // y is free on the whole top side, so the full traction resultant survives
    CHECK(fy == doctest::Approx(-1.0 * 2.0));
    CHECK(gy < 0.0);
    CHECK(gy > 1.75 * -10.0 * 2.0);
    CHECK(L.F.sum() == doctest::Approx(0.25 * 2.0));
    double pd = 0.0;
    for (int dof = 0; dof < dq.n_dofs(); ++dof) pd += L.PD[dof];
    // face basis functions of one face sum to a unit normal component
    CHECK(std::abs(pd) == doctest::Approx(6.0 * 2.0));
    CHECK(L.Gf.cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("initial data") {
  const double e[2] = {1.0, 1.0};
  const int n[2] = {3, 3};
  const Mesh mesh = build_box_mesh(e, n);
  const DofMap du = build_displacement_space(mesh, 2);
  const DofMap dp = build_pressure_space(mesh, 1);
  ReferenceState ref;
  ref.u0 = [](const Point& x) { return Vec3(x[0] * x[1], 1.0 - x[0], 0.0); };
  ref.p0 = [](const Point& x) { return 2.0 * x[0] + x[1]; };
  const InitialData d = assemble_initial(mesh, du, dp, CellMaterials{}, ref, BoundaryData{});
  for (int dof = 0; dof < du.n_dofs(); ++dof) CHECK(d.U0[dof] == doctest::Approx(ref.u0(du.support_point(dof))[dof % 2]));
  const Point xh(0.3, 0.6, 0.0);
  CHECK(dp.eval_scalar(mesh, 4, xh, d.P0) == doctest::Approx(ref.p0(mesh.to_physical(4, xh))));
  CHECK(d.S0.cwiseAbs().maxCoeff() == 0.0);
}
