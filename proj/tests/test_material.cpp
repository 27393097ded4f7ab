#include <doctest.h>

#include <limits>

#include "biot/errors.hpp"
#include "biot/material.hpp"

using namespace biot;

TEST_CASE("parameter validation") {
  MaterialParams m;
  CHECK_NOTHROW(m.validate());
  auto bad = [](auto mutate) {
    MaterialParams p;
    mutate(p);
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
  };
  bad([](MaterialParams& p) { p.mu = 0.0; });
  bad([](MaterialParams& p) { p.lambda = -0.1; });
  bad([](MaterialParams& p) { p.alpha_b = 1.5; });
  bad([](MaterialParams& p) { p.M = 0.0; });
  bad([](MaterialParams& p) { p.K[1] = 0.0; });
  bad([](MaterialParams& p) { p.eta = -1.0; });
  bad([](MaterialParams& p) { p.phi = 1.0; });
  bad([](MaterialParams& p) { p.rho_f = -1.0; });
  bad([](MaterialParams& p) { p.K_dr = 0.0; });
}

TEST_CASE("derived quantities") {
  MaterialParams m;
  m.phi = 0.25;
  m.rho_f = 1.0;
  m.rho_s = 3.0;
  CHECK(m.rho_b() == doctest::Approx(0.25 + 0.75 * 3.0));
  m.M = std::numeric_limits<double>::infinity();
  CHECK(m.inv_M() == 0.0);
  m.lambda = 2.0;
  m.mu = 3.0;
  CHECK(m.drained_bulk(3) == doctest::Approx(4.0));
  CHECK(m.drained_bulk(2) == doctest::Approx(5.0));
}

TEST_CASE("lame parameters") {
  const auto [l, mu] = lame_from_young(1.0, 0.25);
  CHECK(l == doctest::Approx(0.4));
  CHECK(mu == doctest::Approx(0.4));
  CHECK_THROWS_AS(lame_from_young(1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(lame_from_young(-1.0, 0.2), InvalidArgument);
}

TEST_CASE("biot coefficients") {
  const auto inc = derive_coupling(0.3, 0.1, std::numeric_limits<double>::infinity(), 2.0);
  CHECK(inc.alpha_b == 1.0);
  CHECK(inc.M == doctest::Approx(1.0 / 0.03));
  const auto c = derive_coupling(0.2, 0.0, 10.0, 4.0);
  CHECK(c.alpha_b == doctest::Approx(0.6));
  CHECK(c.M == doctest::Approx(1.0 / (0.4 / 10.0)));
  CHECK_THROWS_AS(derive_coupling(0.2, 0.1, 1.0, 2.0), InvalidArgument);
}

TEST_CASE("elasticity") {
  MaterialParams m;
  m.lambda = 2.0;
  m.mu = 0.5;
  Mat3 eps = Mat3::Zero();
  eps(0, 0) = 1.0;
  eps(0, 1) = eps(1, 0) = 0.5;
  const Mat3 s = apply_elasticity(m, eps, 2);
  CHECK(s(0, 0) == doctest::Approx(2.0 + 1.0));
  CHECK(s(1, 1) == doctest::Approx(2.0));
  CHECK(s(0, 1) == doctest::Approx(0.5));
  CHECK(s(2, 2) == 0.0);
}

TEST_CASE("cell overrides") {
  MaterialParams base;
  CellMaterials cm(base);
  MaterialParams soft = base;
  soft.mu = 0.1;
  cm.set(3, soft);
  CHECK(cm.at(3).mu == 0.1);
  CHECK(cm.at(2).mu == base.mu);
  CHECK_FALSE(cm.uniform());
}

TEST_CASE("stress and fluid mass of a uniform state") {
  const double e[2] = {1.0, 1.0};
  const int n[2] = {2, 2};
  const Mesh mesh = build_box_mesh(e, n);
  const DofMap du = build_displacement_space(mesh, 1);
  const DofMap dp = build_pressure_space(mesh, 0);
  MaterialParams m;
  m.lambda = 1.0;
  m.mu = 2.0;
  m.alpha_b = 0.5;
  m.M = 4.0;
  const CellMaterials cm(m);
  Vector u(du.n_dofs());
  for (int dof = 0; dof < du.n_dofs(); ++dof) u[dof] = dof % 2 == 0 ? 0.1 * du.support_point(dof)[0] : 0.0;
  const Vector p = Vector::Constant(dp.n_dofs(), 2.0);
  ReferenceState ref;
  for (const auto& s : volumetric_stress(mesh, du, u, dp, p, ref, cm)) {
    CHECK(s.sigma(0, 0) == doctest::Approx(1.0 * 0.1 + 2 * 2.0 * 0.1 - 1.0));
    CHECK(s.sigma(1, 1) == doctest::Approx(0.1 - 1.0));
    CHECK(s.sigma_v == doctest::Approx((1.0 + 2.0) * 0.1 - 1.0));
    CHECK(s.deviatoric.trace() == doctest::Approx(0.0));
  }
  for (const auto& s : fluid_mass(mesh, du, u, dp, p, ref, cm)) CHECK(s.m == doctest::Approx(0.5 * 0.1 + 2.0 / 4.0));
}
