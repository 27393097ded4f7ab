#include "biot/bench/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "biot/errors.hpp"

namespace biot::bench {

namespace {

constexpr double pi = std::numbers::pi;

struct Trig {
  double sx, sy, cx, cy;
  explicit Trig(const Point& x)
      : sx(std::sin(pi * x[0])), sy(std::sin(pi * x[1])), cx(std::cos(pi * x[0])), cy(std::cos(pi * x[1])) {}
};

MaterialParams default_material() {
  MaterialParams m;
  m.lambda = 1.0;
  m.mu = 1.0;
  m.alpha_b = 1.0;
  m.M = 10.0;
  m.K = Vec3::Ones();
  m.eta = 1.0;
  m.phi = 0.3;
  m.rho_f = 0.0;
  m.rho_s = 1.0;
  return m;
}

}  // namespace

TrigSolution TrigSolution::linear_in_time() {
  TrigSolution s;
  s.material = default_material();
  s.theta = [](double t) { return t; };
  s.dtheta = [](double) { return 1.0; };
  s.psi = [](double t) { return t; };
  s.dpsi = [](double) { return 1.0; };
  return s;
}

TrigSolution TrigSolution::smooth_in_time() {
  TrigSolution s;
  s.material = default_material();
  s.theta = [](double t) { return std::sin(2.0 * pi * t); };
  s.dtheta = [](double t) { return 2.0 * pi * std::cos(2.0 * pi * t); };
  s.psi = [](double t) { return std::cos(2.0 * pi * t); };
  s.dpsi = [](double t) { return -2.0 * pi * std::sin(2.0 * pi * t); };
  return s;
}

Vec3 TrigSolution::u(const Point& x, double t) const {
  const Trig g(x);
  const double v = theta(t) * g.sx * g.sy;
  return Vec3(v, v, 0.0);
}

Mat3 TrigSolution::grad_u(const Point& x, double t) const {
  const Trig g(x);
  const double th = theta(t);
  Mat3 G = Mat3::Zero();
  for (int a = 0; a < 2; ++a) {
    G(a, 0) = th * pi * g.cx * g.sy;
    G(a, 1) = th * pi * g.sx * g.cy;
  }
  return G;
}

double TrigSolution::p(const Point& x, double t) const {
  const Trig g(x);
  return psi(t) * g.cx * g.cy;
}

Vec3 TrigSolution::q(const Point& x, double t) const {
  const Trig g(x);
  const double ps = psi(t);
  const Vec3 grad_p(-ps * pi * g.sx * g.cy, -ps * pi * g.cx * g.sy, 0.0);
  const MaterialParams& m = material;
  return Vec3(-m.K[0] / m.eta * grad_p[0], -m.K[1] / m.eta * grad_p[1], 0.0);
}

Vec3 TrigSolution::body_force(const Point& x, double t) const {
  const Trig g(x);
  const MaterialParams& m = material;
  const double th = theta(t), ps = psi(t);
  const double S = g.sx * g.sy;
  const double common = 2.0 * m.mu * pi * pi * th * S - (m.lambda + m.mu) * th * pi * pi * (g.cx * g.cy - S);
  const Vec3 grad_p(-ps * pi * g.sx * g.cy, -ps * pi * g.cx * g.sy, 0.0);
  return Vec3(common + m.alpha_b * grad_p[0], common + m.alpha_b * grad_p[1], 0.0);
}

double TrigSolution::source(const Point& x, double t) const {
  const Trig g(x);
  const MaterialParams& m = material;
  const double div_q = (m.K[0] + m.K[1]) / m.eta * pi * pi * psi(t) * g.cx * g.cy;
  return m.alpha_b * dtheta(t) * pi * (g.cx * g.sy + g.sx * g.cy) + m.inv_M() * dpsi(t) * g.cx * g.cy + div_q;
}

BoundaryData TrigSolution::data() const {
  BoundaryData d;
  const TrigSolution self = *this;
  const double rho_b = material.rho_b();
  d.gravity = [self, rho_b](const Point& x, double t) { return Vec3(self.body_force(x, t) / rho_b); };
  d.source = [self](const Point& x, double t) { return self.source(x, t); };
  d.pressure = [self](const Point& x, double t, Side) { return self.p(x, t); };
  return d;
}

ReferenceState TrigSolution::reference() const {
  ReferenceState r;
  const TrigSolution self = *this;
  r.u0 = [self](const Point& x) { return self.u(x, 0.0); };
  r.grad_u0 = [self](const Point& x) { return self.grad_u(x, 0.0); };
  r.p0 = [self](const Point& x) { return self.p(x, 0.0); };
  r.sigma0 = [self](const Point& x) {
    const Mat3 G = self.grad_u(x, 0.0);
    const Mat3 eps = 0.5 * (G + G.transpose());
    Mat3 s = apply_elasticity(self.material, eps, 2);
    s(0, 0) -= self.material.alpha_b * self.p(x, 0.0);
    s(1, 1) -= self.material.alpha_b * self.p(x, 0.0);
    return s;
  };
  return r;
}

BoundarySpec TrigSolution::boundary() const {
  BoundarySpec b;
  for (int s = 0; s < 4; ++s) b.sides[static_cast<Side>(s)] = BoundarySpec::clamped(FlowBC::Pressure);
  return b;
}

double fitted_order(const std::vector<double>& parameter, const std::vector<double>& err) {
  if (parameter.size() != err.size() || parameter.size() < 2) throw InvalidArgument("need >= 2 levels to fit");
  const double n = static_cast<double>(parameter.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < parameter.size(); ++i) {
    const double x = std::log(parameter[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double l2_error_scalar(const Mesh& mesh, const DofMap& dp, const Vector& c,
                       const std::function<double(const Point&)>& exact) {
  const CellQuadrature q = tensor_gauss(mesh.dim(), dp.order() + 3);
  double s = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell)
    for (std::size_t k = 0; k < q.size(); ++k) {
      const Point x = mesh.to_physical(cell, q.points[k]);
      const double e = dp.eval_scalar(mesh, cell, q.points[k], c) - (exact ? exact(x) : 0.0);
      s += q.weights[k] * mesh.cell(cell).volume * e * e;
    }
  return std::sqrt(s);
}

double l2_error_vector(const Mesh& mesh, const DofMap& dm, const Vector& c,
                       const std::function<Vec3(const Point&)>& exact) {
  const CellQuadrature q = tensor_gauss(mesh.dim(), dm.order() + 3);
  double s = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell)
    for (std::size_t k = 0; k < q.size(); ++k) {
      const Point x = mesh.to_physical(cell, q.points[k]);
      Vec3 e = dm.eval_vector(mesh, cell, q.points[k], c);
      if (exact) e -= exact(x);
      s += q.weights[k] * mesh.cell(cell).volume * e.squaredNorm();
    }
  return std::sqrt(s);
}

namespace {

std::unique_ptr<BiotProblem> make_problem(const TrigSolution& sol, int n) {
  const double ext[2] = {1.0, 1.0};
  const int div[2] = {n, n};
  Mesh mesh = tag_boundaries(build_box_mesh(ext, div), sol.boundary());
  return std::make_unique<BiotProblem>(std::move(mesh), 1, CellMaterials(sol.material), sol.reference(), sol.data());
}

}  // namespace

ConvergenceReport spatial_convergence(const TrigSolution& sol, const std::vector<int>& cells_per_side,
                                      const TimeScheme& scheme, double T, int N, const FixedStressConfig& cfg) {
  ConvergenceReport rep;
  rep.study = "space " + scheme.label();
  for (int n : cells_per_side) {
    auto pb = make_problem(sol, n);
    FixedStressSolver solver(*pb, cfg);
    const Trajectory tr = march(solver, TimeGrid::uniform(T, N, scheme));
    const SlabInit& end = tr.final_state;
    rep.parameter.push_back(1.0 / n);
    rep.err_u.push_back(l2_error_vector(pb->mesh(), pb->du(), end.u, [&](const Point& x) { return sol.u(x, T); }));
    rep.err_p.push_back(l2_error_scalar(pb->mesh(), pb->dp(), end.p, [&](const Point& x) { return sol.p(x, T); }));
    rep.err_q.push_back(l2_error_vector(pb->mesh(), pb->dq(), end.q, [&](const Point& x) { return sol.q(x, T); }));
  }
  if (rep.parameter.size() >= 2) {
    rep.order_u = fitted_order(rep.parameter, rep.err_u);
    rep.order_p = fitted_order(rep.parameter, rep.err_p);
    rep.order_q = fitted_order(rep.parameter, rep.err_q);
  }
  return rep;
}

ConvergenceReport temporal_convergence(const TrigSolution& sol, int cells_per_side, const TimeScheme& scheme,
                                       double T, const std::vector<int>& slabs, const TimeScheme& ref_scheme,
                                       int ref_N, const FixedStressConfig& cfg) {
  ConvergenceReport rep;
  rep.study = "time " + scheme.label();
  auto pb = make_problem(sol, cells_per_side);
  FixedStressSolver solver(*pb, cfg);
  const SlabInit ref = march(solver, TimeGrid::uniform(T, ref_N, ref_scheme)).final_state;
  for (int N : slabs) {
    const SlabInit end = march(solver, TimeGrid::uniform(T, N, scheme)).final_state;
    rep.parameter.push_back(T / N);
    rep.err_u.push_back(l2_error_vector(pb->mesh(), pb->du(), end.u - ref.u, {}));
    rep.err_p.push_back(l2_error_scalar(pb->mesh(), pb->dp(), end.p - ref.p, {}));
    rep.err_q.push_back(l2_error_vector(pb->mesh(), pb->dq(), end.q - ref.q, {}));
  }
  if (rep.parameter.size() >= 2) {
    rep.order_u = fitted_order(rep.parameter, rep.err_u);
    rep.order_p = fitted_order(rep.parameter, rep.err_p);
    rep.order_q = fitted_order(rep.parameter, rep.err_q);
  }
  return rep;
}

std::vector<ConvergenceReport> manufactured_convergence() {
  FixedStressConfig cfg;
  cfg.tol = 1e-11;
  cfg.max_iterations = 200;
  std::vector<ConvergenceReport> out;
  out.push_back(spatial_convergence(TrigSolution::linear_in_time(), {4, 8, 16, 32}, TimeScheme::dg(1), 0.25, 5, cfg));
  const TrigSolution smooth = TrigSolution::smooth_in_time();
  out.push_back(temporal_convergence(smooth, 8, TimeScheme::dg(0), 0.3, {16, 32, 64, 128}, TimeScheme::dg(2), 256, cfg));
  out.push_back(temporal_convergence(smooth, 8, TimeScheme::cg(1), 0.3, {8, 16, 32, 64}, TimeScheme::dg(2), 256, cfg));
  return out;
}

}  // namespace biot::bench
