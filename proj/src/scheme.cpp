#include "biot/scheme.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <sstream>

#include "biot/errors.hpp"

namespace biot {

namespace {

using LoadList = std::vector<std::shared_ptr<const LoadVectors>>;

SparseMatrix diag(const Vector& v) {
  SparseMatrix D(v.size(), v.size());
  std::vector<Triplet> t;
  for (int i = 0; i < v.size(); ++i) t.emplace_back(i, i, v[i]);
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

int env_threads() {
  const char* s = std::getenv("BIOT_THREADS");
  if (!s) return 1;
  const int n = std::atoi(s);
  return n > 1 ? n : 1;
}

bool is_symmetric(const DenseMatrix& M) {
  return M.rows() == M.cols() && (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + M.cwiseAbs().maxCoeff());
}

// Temporal matrices restricted to the unknown columns and the coefficient
// applied to the p-block (alpha + gamma+ for dG, alpha for cG).
struct Unknowns {
  DenseMatrix beta;
  DenseMatrix storage;
  int first = 0;  // trial index of unknown 0
};

Unknowns unknowns(const TimeCoupling& tc) {
  Unknowns u;
  if (tc.scheme.family == TimeFamily::dG) {
    u.beta = tc.beta;
    u.storage = tc.alpha + tc.gamma_plus;
    u.first = 0;
  } else {
    const int q = tc.scheme.order;
    u.beta = tc.beta.rightCols(q);
    u.storage = tc.alpha.rightCols(q);
    u.first = 1;
  }
  return u;
}

}  // namespace

FixedStressSolver::FixedStressSolver(const BiotProblem& problem, FixedStressConfig cfg)
    : problem_(problem), cfg_(std::move(cfg)), threads_(env_threads()) {
  if (cfg_.K_dr_star && !(*cfg_.K_dr_star > 0.0)) throw InvalidArgument("K_dr* must be > 0");
  if (!(cfg_.tol > 0.0)) throw InvalidArgument("fixed-stress tolerance must be > 0");
  if (cfg_.max_iterations < 1) throw InvalidArgument("max iterations must be >= 1");
  const Mesh& mesh = problem_.mesh();
  const DofMap& dp = problem_.dp();
  stab_p_.resize(dp.n_dofs());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const MaterialParams& m = problem_.materials().at(c);
    const double K = cfg_.K_dr_star ? *cfg_.K_dr_star : m.lambda + 2.0 * m.mu;
    for (int g : dp.cell_dofs(c)) stab_p_[g] = m.alpha_b * m.alpha_b / K;
  }
  rho_p_ = problem_.ops().inv_M_p + stab_p_;
  for (int i = 0; i < rho_p_.size(); ++i)
    if (!(rho_p_[i] > 0.0)) throw InvalidArgument("storage factor 1/M + alpha^2/K_dr* must be > 0");
  Mp_rho_ = diag(rho_p_) * problem_.ops().Mp;
  Mp_stab_ = diag(stab_p_) * problem_.ops().Mp;
  decoupled_ = problem_.ops().alpha_p.cwiseAbs().maxCoeff() == 0.0;
}

LoadList FixedStressSolver::slab_loads(const TimeCoupling& tc, double t0) const {
  LoadList L;
  for (double x : tc.trial_nodes) L.push_back(problem_.loads(x == 0.0 ? t0 : t0 + x * tc.tau));
  return L;
}

const BlockSystem& FixedStressSolver::flow_system(const TimeCoupling& tc) const {
  std::lock_guard lock(mutex_);
  const auto key = std::make_tuple(static_cast<int>(tc.scheme.family), tc.scheme.order, tc.tau);
  auto it = systems_.find(key);
  if (it != systems_.end()) return *it->second;

  const SpatialOperators& ops = problem_.ops();
  const auto& mask = problem_.dq().constraint_mask();
  const Unknowns uk = unknowns(tc);
  const int m = static_cast<int>(uk.beta.rows());
  auto sys = std::make_unique<BlockSystem>();
  sys->n_q = problem_.dq().n_dofs();
  sys->n_p = problem_.dp().n_dofs();
  sys->temporal_blocks = m;
  sys->symmetric = is_symmetric(uk.beta) && is_symmetric(uk.storage);
  std::vector<Triplet> t;
  for (int i = 0; i < m; ++i)
    for (int jj = 0; jj < m; ++jj) {
      const double b = uk.beta(i, jj);
      const double s = uk.storage(i, jj);
      const int rq = sys->q_offset(i), rp = sys->p_offset(i);
      const int cq = sys->q_offset(jj), cp = sys->p_offset(jj);
      if (b != 0.0) {
        for (int r = 0; r < ops.Mq_raw.outerSize(); ++r) {
          if (mask[r]) continue;
          for (SparseMatrix::InnerIterator e(ops.Mq_raw, r); e; ++e)
            if (!mask[e.col()]) t.emplace_back(rq + r, cq + e.col(), b * e.value());
        }
        for (int r = 0; r < ops.Bc.outerSize(); ++r)
          for (SparseMatrix::InnerIterator e(ops.Bc, r); e; ++e) {
            t.emplace_back(rq + r, cp + e.col(), b * e.value());
            t.emplace_back(rp + e.col(), cq + r, b * e.value());
          }
      }
      if (s != 0.0)
        for (int r = 0; r < Mp_rho_.outerSize(); ++r)
          for (SparseMatrix::InnerIterator e(Mp_rho_, r); e; ++e) t.emplace_back(rp + r, cp + e.col(), -s * e.value());
      if (i == jj)
        for (int r = 0; r < sys->n_q; ++r)
          if (mask[r]) t.emplace_back(rq + r, cq + r, 1.0);
    }
  const int n = m * sys->block_size();
  sys->matrix.resize(n, n);
  sys->matrix.setFromTriplets(t.begin(), t.end());
  sys->matrix.makeCompressed();
  sys->fact = factor(sys->matrix, sys->symmetric ? MatrixKind::SymmetricIndefinite : MatrixKind::General);
  auto& ref = *sys;
  systems_.emplace(key, std::move(sys));
  return ref;
}

std::pair<std::vector<Vector>, std::vector<Vector>> FixedStressSolver::solve_flow_dg(
    const TimeCoupling& tc, const LoadList& loads, const SlabInit& init, const std::vector<Vector>& u_prev,
    const std::vector<Vector>& p_prev) const {
  if (tc.scheme.family != TimeFamily::dG) throw InvalidArgument("solve_flow_dg needs a dG coupling");
  const SpatialOperators& ops = problem_.ops();
  const DofMap& dq = problem_.dq();
  const BlockSystem& sys = flow_system(tc);
  const int m = tc.scheme.order + 1;
  const DenseMatrix C = tc.alpha + tc.gamma_plus;
  const Vector X = ops.EaT * init.u + ops.Mp_M * init.p;
  std::vector<Vector> lag(m), darcy(m);
  for (int j = 0; j < m; ++j) {
    lag[j] = ops.EaT * u_prev[j] - Mp_stab_ * p_prev[j];
    darcy[j] = loads[j]->Gf - loads[j]->PD;
  }
  Vector rhs = Vector::Zero(m * sys.block_size());
  for (int i = 0; i < m; ++i) {
    auto rq = rhs.segment(sys.q_offset(i), sys.n_q);
    auto rp = rhs.segment(sys.p_offset(i), sys.n_p);
    rp = -tc.gamma_minus[i] * X;
    for (int j = 0; j < m; ++j) {
      if (tc.beta(i, j) != 0.0) {
        rq += tc.beta(i, j) * darcy[j];
        rp -= tc.beta(i, j) * loads[j]->F;
      }
      if (C(i, j) != 0.0) rp += C(i, j) * lag[j];
    }
    for (int r = 0; r < sys.n_q; ++r)
      if (dq.constrained(r)) rq[r] = 0.0;
  }
  const Vector x = solve_slab_system(sys, rhs);
  std::vector<Vector> q(m), p(m);
  for (int j = 0; j < m; ++j) {
    q[j] = x.segment(sys.q_offset(j), sys.n_q);
    p[j] = x.segment(sys.p_offset(j), sys.n_p);
  }
  return {q, p};
}

std::pair<std::vector<Vector>, std::vector<Vector>> FixedStressSolver::solve_flow_cg(
    const TimeCoupling& tc, const LoadList& loads, const SlabInit& init, const std::vector<Vector>& u_prev,
    const std::vector<Vector>& p_prev) const {
  if (tc.scheme.family != TimeFamily::cG) throw InvalidArgument("solve_flow_cg needs a cG coupling");
  const SpatialOperators& ops = problem_.ops();
  const DofMap& dq = problem_.dq();
  const BlockSystem& sys = flow_system(tc);
  const int qn = tc.scheme.order;
  std::vector<Vector> darcy(qn + 1), lag(qn + 1);
  for (int j = 0; j <= qn; ++j) darcy[j] = loads[j]->Gf - loads[j]->PD;
  for (int j = 1; j <= qn; ++j) lag[j] = ops.EaT * u_prev[j] - Mp_stab_ * p_prev[j];
  const Vector X0 = ops.EaT * init.u + ops.Mp_M * init.p;
  const Vector darcy0 = ops.Mq_raw * init.q + ops.B * init.p;
  const Vector BTq0 = ops.Bc.transpose() * init.q;
  Vector rhs = Vector::Zero(qn * sys.block_size());
  for (int i = 0; i < qn; ++i) {
    auto rq = rhs.segment(sys.q_offset(i), sys.n_q);
    auto rp = rhs.segment(sys.p_offset(i), sys.n_p);
    for (int j = 0; j <= qn; ++j)
      if (tc.beta(i, j) != 0.0) {
        rq += tc.beta(i, j) * darcy[j];
        rp -= tc.beta(i, j) * loads[j]->F;
      }
    if (tc.beta(i, 0) != 0.0) {
      rq -= tc.beta(i, 0) * darcy0;
      rp -= tc.beta(i, 0) * BTq0;
    }
    rp += tc.alpha(i, 0) * X0;
    for (int j = 1; j <= qn; ++j)
      if (tc.alpha(i, j) != 0.0) rp += tc.alpha(i, j) * lag[j];
    for (int r = 0; r < sys.n_q; ++r)
      if (dq.constrained(r)) rq[r] = 0.0;
  }
  const Vector x = solve_slab_system(sys, rhs);
  std::vector<Vector> q(qn + 1), p(qn + 1);
  q[0] = init.q;
  p[0] = init.p;
  for (int j = 1; j <= qn; ++j) {
    q[j] = x.segment(sys.q_offset(j - 1), sys.n_q);
    p[j] = x.segment(sys.p_offset(j - 1), sys.n_p);
  }
  return {q, p};
}

namespace {

// Right-hand side of the displacement increment equation at one trial node.
Vector mech_rhs(const BiotProblem& pb, const LoadVectors& L, const Vector& p) {
  const SpatialOperators& ops = pb.ops();
  Vector r = L.Gb + L.TN - ops.S0 + ops.Ea * (p - ops.P0);
  pb.du().zero_constrained(r);
  return r;
}

std::vector<Vector> solve_many(const Factorization& A, const std::vector<Vector>& rhs, int threads) {
  std::vector<Vector> out(rhs.size());
  if (threads <= 1 || rhs.size() < 2) {
    for (std::size_t j = 0; j < rhs.size(); ++j) out[j] = A.solve(rhs[j]);
    return out;
  }
  std::vector<std::future<Vector>> fut;
  for (std::size_t j = 0; j < rhs.size(); ++j)
    fut.push_back(std::async(std::launch::async, [&A, &rhs, j] { return A.solve(rhs[j]); }));
  for (std::size_t j = 0; j < rhs.size(); ++j) out[j] = fut[j].get();
  return out;
}

}  // namespace

std::vector<Vector> FixedStressSolver::solve_mech_dg(const TimeCoupling& tc, const LoadList& loads,
                                                     const std::vector<Vector>& p) const {
  if (tc.scheme.family != TimeFamily::dG) throw InvalidArgument("solve_mech_dg needs a dG coupling");
  const int m = tc.scheme.order + 1;
  // sum_j beta_ij A d_j = sum_j beta_ij r_j with beta invertible gives A d_j = r_j.
  std::vector<Vector> r(m);
  for (int j = 0; j < m; ++j) r[j] = mech_rhs(problem_, *loads[j], p[j]);
  std::vector<Vector> d = solve_many(problem_.stiffness_factor(), r, threads_);
  for (auto& v : d) v += problem_.ops().U0;
  return d;
}

std::vector<Vector> FixedStressSolver::solve_mech_cg(const TimeCoupling& tc, const LoadList& loads,
                                                     const std::vector<Vector>& p, const Vector& u_init) const {
  if (tc.scheme.family != TimeFamily::cG) throw InvalidArgument("solve_mech_cg needs a cG coupling");
  const SpatialOperators& ops = problem_.ops();
  const int qn = tc.scheme.order;
  std::vector<Vector> r(qn);
  for (int j = 1; j <= qn; ++j) r[j - 1] = mech_rhs(problem_, *loads[j], p[j]);
  const Vector b0 = tc.beta.col(0);
  if (b0.cwiseAbs().maxCoeff() != 0.0) {
    // sum_{j>=1} beta_ij (A d_j - r_j) = -beta_i0 (A d_0 - r_0)
    Vector d0 = u_init - ops.U0;
    problem_.du().zero_constrained(d0);
    const Vector e0 = ops.A * d0 - mech_rhs(problem_, *loads[0], p[0]);
    const Vector c = -tc.beta.rightCols(qn).partialPivLu().solve(b0);
    for (int j = 0; j < qn; ++j) r[j] += c[j] * e0;
  }
  std::vector<Vector> d = solve_many(problem_.stiffness_factor(), r, threads_);
  std::vector<Vector> u(qn + 1);
  u[0] = u_init;
  for (int j = 1; j <= qn; ++j) u[j] = d[j - 1] + ops.U0;
  return u;
}

double FixedStressSolver::coupled_mass_residual(const TimeCoupling& tc, const LoadList& loads, const SlabInit& init,
                                                const SlabSolution& sol) const {
  const SpatialOperators& ops = problem_.ops();
  const bool dg = tc.scheme.family == TimeFamily::dG;
  const DenseMatrix C = dg ? DenseMatrix(tc.alpha + tc.gamma_plus) : tc.alpha;
  const int rows = static_cast<int>(tc.beta.rows());
  const int cols = static_cast<int>(tc.beta.cols());
  std::vector<Vector> X(cols), BTq(cols);
  std::vector<double> X_size(cols);
  for (int j = 0; j < cols; ++j) {
    const Vector vol = ops.EaT * sol.u[j], stor = ops.Mp_M * sol.p[j];
    X[j] = vol + stor;
    X_size[j] = std::max(inf_norm(vol), inf_norm(stor));
    BTq[j] = ops.Bc.transpose() * sol.q[j];
  }
  const Vector Xm = ops.EaT * init.u + ops.Mp_M * init.p;
  const double Xm_size = std::max(inf_norm(ops.EaT * init.u), inf_norm(ops.Mp_M * init.p));
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < rows; ++i) {
    Vector flow = Vector::Zero(problem_.dp().n_dofs());
    Vector store = Vector::Zero(flow.size());
    Vector src = Vector::Zero(flow.size());
    for (int j = 0; j < cols; ++j) {
      flow += tc.beta(i, j) * BTq[j];
      store += C(i, j) * X[j];
      src += tc.beta(i, j) * loads[j]->F;
      // size of the individual terms, so cancellation inside one sum does not shrink the scale
      scale = std::max({scale, std::abs(tc.beta(i, j)) * inf_norm(BTq[j]), std::abs(C(i, j)) * X_size[j],
                        std::abs(tc.beta(i, j)) * inf_norm(loads[j]->F)});
    }
    const Vector init_term = dg ? Vector(tc.gamma_minus[i] * Xm) : Vector::Zero(flow.size());
    const Vector res = flow - store + init_term + src;
    worst = std::max(worst, inf_norm(res));
    if (dg) scale = std::max(scale, std::abs(tc.gamma_minus[i]) * Xm_size);
  }
  return scale > 0.0 ? worst / scale : worst;
}

namespace {

// With observed contraction rho, the distance to the fixed point is about
// rho/(1-rho) times the last change; for rho < 1/2 the change alone bounds it.
bool settled(const std::vector<double>& history, double tol) {
  const std::size_t k = history.size();
  if (k < 2 || history[k - 1] == 0.0) return true;
  const double rho = history[k - 1] / history[k - 2];
  if (rho < 0.5) return true;
  return rho < 1.0 && rho / (1.0 - rho) * history[k - 1] <= tol;
}

}  // namespace

SlabSolution FixedStressSolver::fixed_stress_slab(int n, const TimeScheme& scheme, double t0, double tau,
                                                  const SlabInit& init) const {
  const TimeCoupling tc = time_matrices(scheme, tau);
  const LoadList loads = slab_loads(tc, t0);
  const int m = scheme.trial_count();
  const bool dg = scheme.family == TimeFamily::dG;
  SlabSolution sol;
  sol.slab = n;
  sol.scheme = scheme;
  sol.t0 = t0;
  sol.tau = tau;
  sol.u.assign(m, init.u);
  sol.p.assign(m, init.p);
  sol.q.assign(m, init.q);
  std::vector<double> history;
  bool converged = false;
  for (int s = 1; s <= cfg_.max_iterations; ++s) {
    auto [q, p] = dg ? solve_flow_dg(tc, loads, init, sol.u, sol.p) : solve_flow_cg(tc, loads, init, sol.u, sol.p);
    std::vector<Vector> u = dg ? solve_mech_dg(tc, loads, p) : solve_mech_cg(tc, loads, p, init.u);
    double cp = 0.0, cu = 0.0;
    for (int j = 0; j < m; ++j) {
      cp = std::max(cp, inf_norm(p[j] - sol.p[j]) / std::max(1.0, inf_norm(p[j])));
      cu = std::max(cu, inf_norm(u[j] - sol.u[j]) / std::max(1.0, inf_norm(u[j])));
    }
    sol.q = std::move(q);
    sol.p = std::move(p);
    sol.u = std::move(u);
    sol.iterations = s;
    sol.change_p.push_back(cp);
    sol.change_u.push_back(cu);
    history.push_back(std::max(cp, cu));
    if (!std::isfinite(cp) || !std::isfinite(cu)) {
      std::ostringstream os;
      os << "fixed-stress iteration diverged on slab " << n << " after " << s << " iterations";
      throw NonConvergenceError(os.str(), n, history);
    }
    if (decoupled_ || (cp <= cfg_.tol && cu <= cfg_.tol && settled(history, cfg_.tol))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "fixed-stress iteration did not converge on slab " << n << " within " << cfg_.max_iterations
       << " iterations (last change " << history.back() << ")";
    throw NonConvergenceError(os.str(), n, history);
  }
  sol.mass_residual = coupled_mass_residual(tc, loads, init, sol);
  const double limit = std::max(cfg_.residual_factor * cfg_.tol, 1e-10);
  if (!(sol.mass_residual <= limit)) {
    std::ostringstream os;
    os << "slab " << n << ": coupled mass residual " << sol.mass_residual << " exceeds " << limit
       << " after fixed-stress convergence";
    throw NonConvergenceError(os.str(), n, history);
  }
  return sol;
}

Vector FixedStressSolver::consistent_initial_flux(double t) const {
  const SpatialOperators& ops = problem_.ops();
  const auto L = problem_.loads(t);
  Vector rhs = L->Gf - L->PD - ops.B * ops.P0;
  problem_.dq().zero_constrained(rhs);
  if (rhs.norm() == 0.0) return Vector::Zero(rhs.size());
  return factor(ops.Mq, MatrixKind::SPD).solve(rhs);
}

SlabInit FixedStressSolver::initial_state() const {
  return {problem_.ops().U0, consistent_initial_flux(0.0), problem_.ops().P0};
}

SlabInit transfer_state(const SlabSolution& sol) {
  SlabInit s;
  s.u = eval_trial(sol.scheme, sol.u, 1.0);
  s.q = eval_trial(sol.scheme, sol.q, 1.0);
  s.p = eval_trial(sol.scheme, sol.p, 1.0);
  return s;
}

Trajectory march(const FixedStressSolver& solver, const TimeGrid& grid, const SlabObserver& observer, bool keep,
                 std::optional<SlabInit> start) {
  grid.validate();
  Trajectory tr;
  SlabInit state = start ? *start : solver.initial_state();
  const auto t_start = std::chrono::steady_clock::now();
  for (int n = 0; n < grid.n_slabs(); ++n) {
    SlabSolution sol = solver.fixed_stress_slab(n, grid.schemes[n], grid.bounds[n], grid.tau(n), state);
    SlabInit end = transfer_state(sol);
    MarchRecord rec;
    rec.slab = n;
    rec.t_end = grid.bounds[n + 1];
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    tr.iterations.push_back(sol.iterations);
    if (observer) observer(sol, end, rec);
    if (keep) {
      tr.slabs.push_back(sol);
      tr.ends.push_back(end);
    }
    state = std::move(end);
  }
  tr.final_state = std::move(state);
  return tr;
}

}  // namespace biot
