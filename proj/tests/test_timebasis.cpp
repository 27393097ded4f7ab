#include <doctest.h>

#include <cmath>

#include "biot/errors.hpp"
#include "biot/timebasis.hpp"
#include "oracles.hpp"

using namespace biot;

TEST_CASE("gauss rules") {
  const auto g1 = gauss_legendre(1);
  REQUIRE(g1.size() == 1);
  CHECK(g1.nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

  const auto g2 = gauss_legendre(2);
  CHECK(std::abs(g2.nodes[0] - (3.0 - std::sqrt(3.0)) / 6.0) < 1e-15);
  CHECK(std::abs(g2.nodes[1] - (3.0 + std::sqrt(3.0)) / 6.0) < 1e-15);
  CHECK(std::abs(g2.weights[0] - 0.5) < 1e-15);
  CHECK(std::abs(g2.weights[1] - 0.5) < 1e-15);

  CHECK_THROWS_AS(gauss_legendre(0), InvalidArgument);
}

TEST_CASE("gauss exactness and agreement with eigenvalue rule") {
  for (int k = 1; k <= 8; ++k) {
    const auto g = gauss_legendre(k);
    const auto o = oracle::golub_welsch(k);
    double sw = 0.0, sx = 0.0;
    for (int i = 0; i < k; ++i) {
      CHECK(g.weights[i] > 0.0);
      if (i) CHECK(g.nodes[i] > g.nodes[i - 1]);
      CHECK(std::abs(g.nodes[i] - o.x[i]) < 1e-14);
      CHECK(std::abs(g.weights[i] - o.w[i]) < 1e-14);
      sw += g.weights[i];
      sx += g.weights[i] * g.nodes[i];
    }
    CHECK(std::abs(sw - 1.0) < 1e-14);
    CHECK(std::abs(sx - 0.5) < 1e-14);
    for (int m = 0; m <= 2 * k - 1; ++m) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += g.weights[i] * std::pow(g.nodes[i], m);
      CHECK(std::abs(s - 1.0 / (m + 1)) < 1e-14);
    }
  }
}

TEST_CASE("dG(0) and dG(1) matrices") {
  const double tau = 0.3;
  const auto t0 = dg_time_matrices(0, tau);
  CHECK(t0.alpha(0, 0) == 0.0);
  CHECK(t0.beta(0, 0) == doctest::Approx(tau).epsilon(1e-15));
  CHECK(t0.gamma_minus[0] == doctest::Approx(1.0));
  CHECK(t0.gamma_plus(0, 0) == doctest::Approx(1.0));

  const auto t1 = dg_time_matrices(1, tau);
  const double s = std::sqrt(3.0) / 2.0;
  CHECK(std::abs(t1.alpha(0, 0) + s) < 1e-14);
  CHECK(std::abs(t1.alpha(0, 1) - s) < 1e-14);
  CHECK(std::abs(t1.alpha(1, 0) + s) < 1e-14);
  CHECK(std::abs(t1.alpha(1, 1) - s) < 1e-14);
  CHECK(std::abs(t1.beta(0, 0) - tau / 2) < 1e-15);
  CHECK(std::abs(t1.beta(1, 1) - tau / 2) < 1e-15);
  CHECK(std::abs(t1.beta(0, 1)) < 1e-15);
}

TEST_CASE("time matrices match the quadrature oracle") {
  const double tau = 0.137;
  for (int r = 0; r <= 4; ++r) {
    const auto t = dg_time_matrices(r, tau);
    const auto o = oracle::dg_matrices(r, tau);
    CHECK((t.alpha - o.alpha).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((t.beta - o.beta).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((t.gamma_minus - o.gamma_minus).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((t.gamma_plus - o.gamma_plus).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(t.alpha.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i <= r; ++i) CHECK(std::abs(t.gamma_plus.row(i).sum() - t.gamma_minus[i]) < 1e-13);
    // symmetric positive definite beta
    CHECK((t.beta - t.beta.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(t.beta.diagonal().minCoeff() > 0.0);
  }
  for (int q = 1; q <= 4; ++q) {
    const auto t = cg_time_matrices(q, tau);
    const auto o = oracle::cg_matrices(q, tau);
    REQUIRE(t.alpha.rows() == q);
    REQUIRE(t.alpha.cols() == q + 1);
    CHECK((t.alpha - o.alpha).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((t.beta - o.beta).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(t.alpha.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    const auto g = gauss_legendre(q);
    for (int i = 0; i < q; ++i) CHECK(std::abs(t.beta.row(i).sum() - tau * g.weights[i]) < 1e-14);
  }
}

TEST_CASE("cG(1) matrices") {
  const double tau = 0.01;
  const auto t = cg_time_matrices(1, tau);
  CHECK(t.alpha(0, 0) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(t.alpha(0, 1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(t.beta(0, 0)) < 1e-16);
  CHECK(t.beta(0, 1) == doctest::Approx(tau).epsilon(1e-14));
  REQUIRE(t.trial_nodes.size() == 2);
  CHECK(t.trial_nodes[0] == 0.0);
  CHECK(t.trial_nodes[1] == doctest::Approx(0.5));
}

TEST_CASE("trial evaluation") {
  Vector c(2);
  c << 1.0, -2.0;
  CHECK((eval_trial(TimeScheme::dg(0), std::vector<Vector>{c}, 0.7) - c).norm() == 0.0);

  Vector c0(1), c1(1);
  c0 << 3.0;
  c1 << 5.0;
  CHECK(eval_trial(TimeScheme::cg(1), std::vector<Vector>{c0, c1}, 1.0)[0] == doctest::Approx(2 * 5.0 - 3.0));
  CHECK(eval_trial(TimeScheme::dg(1), std::vector<Vector>{c1, c1}, 1.0)[0] == doctest::Approx(5.0));
  CHECK_THROWS_AS(eval_trial(TimeScheme::dg(1), std::vector<Vector>{c1}, 1.0), InvalidArgument);
}

TEST_CASE("time grids") {
  const TimeGrid g = TimeGrid::scheme1(0.5, 500);
  CHECK(g.n_slabs() == 500);
  CHECK(g.schemes[0] == TimeScheme::dg(1));
  for (int n = 1; n < 500; ++n) CHECK(g.schemes[n] == TimeScheme::cg(1));
  CHECK(g.max_tau() == doctest::Approx(0.001));
  CHECK(g.bounds.back() == 0.5);
  CHECK(TimeScheme::dg(1).unknown_blocks() == 2);
  CHECK(TimeScheme::cg(1).unknown_blocks() == 1);
  CHECK(TimeScheme::dg(0).unknown_blocks() == 1);
}
