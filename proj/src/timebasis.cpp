#include "biot/timebasis.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "biot/errors.hpp"

namespace biot {

namespace {

// P_k(x) and P_k'(x) by the three-term recurrence.
std::pair<double, double> legendre(int k, double x) {
  double p0 = 1.0, p1 = x;
  for (int n = 2; n <= k; ++n) {
    const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
    p0 = p1;
    p1 = p2;
  }
  return {p1, k * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

QuadratureRule gauss_legendre(int k) {
  if (k < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one point");
  QuadratureRule q;
  q.nodes.resize(k);
  q.weights.resize(k);
  for (int i = 0; i < k; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(k, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(k, x).second;
    q.nodes[k - 1 - i] = 0.5 * (x + 1.0);
    q.weights[k - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

LagrangeBasis1D::LagrangeBasis1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InvalidArgument("Lagrange basis needs at least one node");
  const std::size_t n = nodes_.size();
  bary_.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) {
        const double diff = nodes_[i] - nodes_[j];
        if (diff == 0.0) throw InvalidArgument("Lagrange nodes must be distinct");
        bary_[i] /= diff;
      }
}

std::vector<double> LagrangeBasis1D::values(double t) const {
  const std::size_t n = nodes_.size();
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (t == nodes_[i]) {
      v[i] = 1.0;
      return v;
    }
  double denom = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = bary_[i] / (t - nodes_[i]);
    denom += v[i];
  }
  for (auto& x : v) x /= denom;
  return v;
}

double LagrangeBasis1D::value(std::size_t i, double t) const { return values(t)[i]; }

std::vector<double> LagrangeBasis1D::derivatives(double t) const {
  const std::size_t n = nodes_.size();
  std::vector<double> d(n, 0.0);
  if (n == 1) return d;
  std::size_t hit = n;
  for (std::size_t i = 0; i < n; ++i)
    if (t == nodes_[i]) hit = i;
  if (hit < n) {
    // l_j'(x_k) = (b_j/b_k)/(x_k - x_j) for j != k; l_k'(x_k) = -sum of the others.
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != hit) {
        d[j] = (bary_[j] / bary_[hit]) / (nodes_[hit] - nodes_[j]);
        s += d[j];
      }
    d[hit] = -s;
    return d;
  }
  // l_j(t) = ell(t) b_j / (t - x_j) with ell = prod (t - x_k):
  // l_j'(t) = l_j(t) * (sum_k 1/(t - x_k) - 1/(t - x_j)).
  const std::vector<double> v = values(t);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += 1.0 / (t - nodes_[k]);
  for (std::size_t j = 0; j < n; ++j) d[j] = v[j] * (s - 1.0 / (t - nodes_[j]));
  return d;
}

double LagrangeBasis1D::derivative(std::size_t i, double t) const { return derivatives(t)[i]; }

std::string TimeScheme::label() const {
  return (family == TimeFamily::dG ? "dG(" : "cG(") + std::to_string(order) + ")";
}

std::vector<double> trial_nodes(const TimeScheme& s) {
  if (s.family == TimeFamily::dG) {
    if (s.order < 0) throw InvalidArgument("dG order must be >= 0");
    return gauss_legendre(s.order + 1).nodes;
  }
  if (s.order < 1) throw InvalidArgument("cG order must be >= 1");
  std::vector<double> n{0.0};
  for (double x : gauss_legendre(s.order).nodes) n.push_back(x);
  return n;
}

TimeCoupling dg_time_matrices(int r, double tau) {
  if (r < 0) throw InvalidArgument("dG order must be >= 0");
  if (!(tau > 0.0)) throw InvalidArgument("slab length must be positive");
  TimeCoupling tc;
  tc.scheme = TimeScheme::dg(r);
  tc.tau = tau;
  const QuadratureRule g = gauss_legendre(r + 1);
  tc.trial_nodes = g.nodes;
  tc.test_nodes = g.nodes;
  const LagrangeBasis1D basis(g.nodes);
  const int n = r + 1;
  tc.alpha = DenseMatrix::Zero(n, n);
  tc.beta = DenseMatrix::Zero(n, n);
  // alpha integrand has degree 2r-1, beta 2r: the (r+1)-point rule is exact.
  for (int k = 0; k < n; ++k) {
    const auto v = basis.values(g.nodes[k]);
    const auto dv = basis.derivatives(g.nodes[k]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        tc.alpha(i, j) += g.weights[k] * v[i] * dv[j];
        tc.beta(i, j) += tau * g.weights[k] * v[i] * v[j];
      }
  }
  const auto z0 = basis.values(0.0);
  tc.gamma_minus = Vector::Map(z0.data(), n);
  tc.gamma_plus = tc.gamma_minus * tc.gamma_minus.transpose();
  return tc;
}

TimeCoupling cg_time_matrices(int q, double tau) {
  if (q < 1) throw InvalidArgument("cG order must be >= 1");
  if (!(tau > 0.0)) throw InvalidArgument("slab length must be positive");
  TimeCoupling tc;
  tc.scheme = TimeScheme::cg(q);
  tc.tau = tau;
  const QuadratureRule g = gauss_legendre(q);
  tc.trial_nodes = trial_nodes(tc.scheme);
  tc.test_nodes = g.nodes;
  const LagrangeBasis1D trial(tc.trial_nodes);
  const LagrangeBasis1D test(g.nodes);
  tc.alpha = DenseMatrix::Zero(q, q + 1);
  tc.beta = DenseMatrix::Zero(q, q + 1);
  for (int k = 0; k < q; ++k) {
    const auto zt = test.values(g.nodes[k]);
    const auto xi = trial.values(g.nodes[k]);
    const auto dxi = trial.derivatives(g.nodes[k]);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j <= q; ++j) {
        tc.alpha(i, j) += g.weights[k] * zt[i] * dxi[j];
        tc.beta(i, j) += tau * g.weights[k] * zt[i] * xi[j];
      }
  }
  return tc;
}

TimeCoupling time_matrices(const TimeScheme& s, double tau) {
  return s.family == TimeFamily::dG ? dg_time_matrices(s.order, tau) : cg_time_matrices(s.order, tau);
}

std::vector<double> trial_weights(const TimeScheme& s, double t) {
  return LagrangeBasis1D(trial_nodes(s)).values(t);
}

Vector eval_trial(const TimeScheme& s, std::span<const Vector> coeffs, double t) {
  const auto w = trial_weights(s, t);
  if (coeffs.size() != w.size())
    throw InvalidArgument("expected " + std::to_string(w.size()) + " coefficient vectors for " + s.label() +
                          ", got " + std::to_string(coeffs.size()));
  Vector out = Vector::Zero(coeffs[0].size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (coeffs[j].size() != out.size()) throw InvalidArgument("coefficient vectors differ in length");
    if (w[j] != 0.0) out += w[j] * coeffs[j];
  }
  return out;
}

double TimeGrid::max_tau() const {
  double m = 0.0;
  for (int n = 0; n < n_slabs(); ++n) m = std::max(m, tau(n));
  return m;
}

TimeGrid TimeGrid::uniform(double T, int N, const TimeScheme& s) {
  if (!(T > 0.0)) throw InvalidArgument("final time must be positive");
  if (N < 1) throw InvalidArgument("slab count must be >= 1");
  TimeGrid g;
  g.T = T;
  g.bounds.resize(N + 1);
  for (int n = 0; n <= N; ++n) g.bounds[n] = T * n / N;
  g.bounds[N] = T;
  g.schemes.assign(N, s);
  return g;
}

TimeGrid TimeGrid::scheme1(double T, int N) {
  TimeGrid g = uniform(T, N, TimeScheme::cg(1));
  g.schemes[0] = TimeScheme::dg(1);
  return g;
}

void TimeGrid::validate() const {
  if (bounds.size() != schemes.size() + 1 || schemes.empty())
    throw InvalidArgument("time grid needs N+1 bounds for N slabs");
  if (bounds.front() != 0.0) throw InvalidArgument("time grid must start at 0");
  for (int n = 0; n < n_slabs(); ++n)
    if (!(tau(n) > 0.0)) throw InvalidArgument("slab lengths must be positive");
  for (const auto& s : schemes) trial_nodes(s);
}

}  // namespace biot
