#include "biot/bench/monolithic.hpp"

#include <Eigen/SparseLU>

#include "biot/errors.hpp"

namespace biot::bench {

namespace {

void add_block(std::vector<Triplet>& t, const SparseMatrix& M, double s, int r0, int c0,
               const std::vector<char>* skip_rows = nullptr, const std::vector<char>* skip_cols = nullptr) {
  if (s == 0.0) return;
  for (int r = 0; r < M.outerSize(); ++r) {
    if (skip_rows && (*skip_rows)[r]) continue;
    for (SparseMatrix::InnerIterator e(M, r); e; ++e) {
      if (skip_cols && (*skip_cols)[e.col()]) continue;
      t.emplace_back(r0 + r, c0 + e.col(), s * e.value());
    }
  }
}

}  // namespace

SlabSolution monolithic_oracle(const FixedStressSolver& solver, const TimeScheme& scheme, double t0, double tau,
                               const SlabInit& init) {
  const BiotProblem& pb = solver.problem();
  const SpatialOperators& ops = pb.ops();
  const int nu = pb.du().n_dofs(), nq = pb.dq().n_dofs(), np = pb.dp().n_dofs();
  const int bs = nu + nq + np;
  const int m = scheme.unknown_blocks();
  if (m * bs > kMonolithicMaxDofs)
    throw InvalidArgument("monolithic oracle limited to " + std::to_string(kMonolithicMaxDofs) + " unknowns");

  const TimeCoupling tc = time_matrices(scheme, tau);
  const auto loads = solver.slab_loads(tc, t0);
  const bool dg = scheme.family == TimeFamily::dG;
  const int first = dg ? 0 : 1;
  const int cols = static_cast<int>(tc.beta.cols());
  const DenseMatrix C = dg ? DenseMatrix(tc.alpha + tc.gamma_plus) : tc.alpha;
  const auto& umask = pb.du().constraint_mask();
  const auto& qmask = pb.dq().constraint_mask();
  const SparseMatrix BcT = ops.Bc.transpose();

  std::vector<Triplet> t;
  Vector rhs = Vector::Zero(m * bs);
  auto ou = [&](int j) { return j * bs; };
  auto oq = [&](int j) { return j * bs + nu; };
  auto op = [&](int j) { return j * bs + nu + nq; };

  // Known slab-start data (cG only).
  Vector d0 = init.u - ops.U0;
  pb.du().zero_constrained(d0);
  const Vector X0 = ops.EaT * init.u + ops.Mp_M * init.p;

  for (int i = 0; i < m; ++i) {
    for (int jj = 0; jj < m; ++jj) {
      const int j = jj + first;
      const double b = tc.beta(i, j), s = C(i, j);
      // mechanics: beta (A d - alpha E p)
      add_block(t, ops.A_raw, b, ou(i), ou(jj), &umask, &umask);
      add_block(t, ops.Ea, -b, ou(i), op(jj), &umask);
      // Darcy: beta (Mq q + B p)
      add_block(t, ops.Mq_raw, b, oq(i), oq(jj), &qmask, &qmask);
      add_block(t, ops.Bc, b, oq(i), op(jj));
      // mass: beta B^T q - C (Mp/M p + alpha E^T d)
      add_block(t, BcT, b, op(i), oq(jj));
      add_block(t, ops.Mp_M, -s, op(i), op(jj));
      add_block(t, ops.EaT, -s, op(i), ou(jj), nullptr, &umask);
      if (i == jj) {
        for (int r = 0; r < nu; ++r)
          if (umask[r]) t.emplace_back(ou(i) + r, ou(jj) + r, 1.0);
        for (int r = 0; r < nq; ++r)
          if (qmask[r]) t.emplace_back(oq(i) + r, oq(jj) + r, 1.0);
      }
    }
    auto ru = rhs.segment(ou(i), nu);
    auto rq = rhs.segment(oq(i), nq);
    auto rp = rhs.segment(op(i), np);
    for (int j = 0; j < cols; ++j) {
      const LoadVectors& L = *loads[j];
      const double b = tc.beta(i, j);
      if (b != 0.0) {
        ru += b * (L.Gb + L.TN - ops.S0 - ops.Ea * ops.P0);
        rq += b * (L.Gf - L.PD);
        rp -= b * L.F;
      }
      if (j >= first) rp += C(i, j) * (ops.EaT * ops.U0);
    }
    if (dg) {
      rp -= tc.gamma_minus[i] * (ops.EaT * init.u + ops.Mp_M * init.p);
    } else {
      const double b0 = tc.beta(i, 0);
      if (b0 != 0.0) {
        ru -= b0 * (ops.A * d0 - ops.Ea * init.p);
        rq -= b0 * (ops.Mq_raw * init.q + ops.B * init.p);
        rp -= b0 * (BcT * init.q);
      }
      rp += tc.alpha(i, 0) * X0;
    }
    for (int r = 0; r < nu; ++r)
      if (umask[r]) ru[r] = 0.0;
    for (int r = 0; r < nq; ++r)
      if (qmask[r]) rq[r] = 0.0;
  }

  using ColMatrix = Eigen::SparseMatrix<double>;
  ColMatrix K(m * bs, m * bs);
  K.setFromTriplets(t.begin(), t.end());
  K.makeCompressed();
  Eigen::SparseLU<ColMatrix> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success) throw SolverError("monolithic factorization failed: " + lu.lastErrorMessage());
  const Vector x = lu.solve(rhs);
  const double bn = rhs.norm();
  if (bn > 0.0 && (K * x - rhs).norm() > 1e-10 * bn) throw SolverError("monolithic residual above 1e-10");

  SlabSolution sol;
  sol.scheme = scheme;
  sol.t0 = t0;
  sol.tau = tau;
  sol.iterations = 1;
  if (!dg) {
    sol.u.push_back(init.u);
    sol.q.push_back(init.q);
    sol.p.push_back(init.p);
  }
  for (int jj = 0; jj < m; ++jj) {
    sol.u.push_back(x.segment(ou(jj), nu) + ops.U0);
    sol.q.push_back(x.segment(oq(jj), nq));
    sol.p.push_back(x.segment(op(jj), np));
  }
  return sol;
}

}  // namespace biot::bench
