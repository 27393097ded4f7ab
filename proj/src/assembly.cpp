#include "biot/assembly.hpp"

#include <cmath>

#include "biot/errors.hpp"

namespace biot {

namespace {

Vec3 cell_size(const Mesh& mesh, int cell) {
  Vec3 h = Vec3::Ones();
  const Point s = mesh.cell(cell).size();
  for (int a = 0; a < mesh.dim(); ++a) h[a] = s[a];
  return h;
}

// Scalar element values and reference gradients at quadrature points.
struct ScalarTable {
  DenseMatrix val;                 // [qp, shape]
  std::vector<DenseMatrix> grad;   // per axis: [qp, shape]
};

ScalarTable tabulate(const ScalarQ& e, const CellQuadrature& q) {
  ScalarTable t;
  const int nq = static_cast<int>(q.size());
  t.val.resize(nq, e.size());
  t.grad.assign(3, DenseMatrix::Zero(nq, e.size()));
  for (int k = 0; k < nq; ++k)
    for (int i = 0; i < e.size(); ++i) {
      t.val(k, i) = e.value(i, q.points[k]);
      const Vec3 g = e.gradient(i, q.points[k]);
      for (int a = 0; a < 3; ++a) t.grad[a](k, i) = g[a];
    }
  return t;
}

struct RTTable {
  DenseMatrix val;   // [qp, shape], value of the single nonzero component
  DenseMatrix div;   // [qp, shape], reference divergence
  std::vector<int> comp;
};

RTTable tabulate(const RaviartThomasQ& e, const CellQuadrature& q) {
  RTTable t;
  const int nq = static_cast<int>(q.size());
  t.val.resize(nq, e.size());
  t.div.resize(nq, e.size());
  for (int i = 0; i < e.size(); ++i) t.comp.push_back(e.dof(i).component);
  for (int k = 0; k < nq; ++k)
    for (int i = 0; i < e.size(); ++i) {
      t.val(k, i) = e.value(i, q.points[k])[t.comp[i]];
      t.div(k, i) = e.ref_divergence(i, q.points[k]);
    }
  return t;
}

void require(const Mesh& mesh, const DofMap& m, SpaceKind kind, const char* what) {
  check_compatible(mesh, m);
  if (m.kind() != kind) throw InvalidArgument(std::string("expected a ") + what + " space");
}

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SparseMatrix M(rows, cols);
  M.setFromTriplets(t.begin(), t.end());
  M.makeCompressed();
  return M;
}

int default_n(QuadratureChoice q, int n) { return q.n > 0 ? q.n : n; }

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& du, const CellMaterials& mat, QuadratureChoice qc) {
  require(mesh, du, SpaceKind::Displacement, "displacement");
  const int d = mesh.dim();
  const CellQuadrature q = tensor_gauss(d, default_n(qc, du.order() + 1));
  const ScalarTable tab = tabulate(du.scalar_element(), q);
  const int ns = du.scalar_element().size();
  const int nl = du.dofs_per_cell();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(mesh.n_cells()) * nl * nl);
  DenseMatrix Ke(nl, nl);
  DenseMatrix G(d, ns);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const MaterialParams& m = mat.at(c);
    const Vec3 h = cell_size(mesh, c);
    const double vol = mesh.cell(c).volume;
    Ke.setZero();
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * vol;
      for (int a = 0; a < d; ++a)
        for (int n = 0; n < ns; ++n) G(a, n) = tab.grad[a](k, n) / h[a];
      for (int n = 0; n < ns; ++n)
        for (int a = 0; a < d; ++a) {
          const int i = d * n + a;
          for (int mm = 0; mm < ns; ++mm)
            for (int b = 0; b < d; ++b) {
              const int j = d * mm + b;
              // eps(N_n e_a) : C eps(N_m e_b)
              double v = m.lambda * G(a, n) * G(b, mm) + m.mu * G(b, n) * G(a, mm);
              if (a == b) {
                double gg = 0.0;
                for (int e = 0; e < d; ++e) gg += G(e, n) * G(e, mm);
                v += m.mu * gg;
              }
              Ke(i, j) += w * v;
            }
        }
    }
    const auto dofs = du.cell_dofs(c);
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) trip.emplace_back(dofs[i], dofs[j], Ke(i, j));
  }
  return from_triplets(du.n_dofs(), du.n_dofs(), trip);
}

SparseMatrix assemble_coupling(const Mesh& mesh, const DofMap& du, const DofMap& dp, QuadratureChoice qc) {
  require(mesh, du, SpaceKind::Displacement, "displacement");
  require(mesh, dp, SpaceKind::Pressure, "pressure");
  const int d = mesh.dim();
  const CellQuadrature q = tensor_gauss(d, default_n(qc, du.order() + 1));
  const ScalarTable tu = tabulate(du.scalar_element(), q);
  const ScalarTable tp = tabulate(dp.scalar_element(), q);
  const int ns = du.scalar_element().size();
  const int np = dp.dofs_per_cell();
  std::vector<Triplet> trip;
  DenseMatrix Ee(du.dofs_per_cell(), np);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec3 h = cell_size(mesh, c);
    const double vol = mesh.cell(c).volume;
    Ee.setZero();
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * vol;
      for (int n = 0; n < ns; ++n)
        for (int a = 0; a < d; ++a) {
          const double div = tu.grad[a](k, n) / h[a];
          for (int j = 0; j < np; ++j) Ee(d * n + a, j) += w * div * tp.val(k, j);
        }
    }
    const auto ud = du.cell_dofs(c);
    const auto pd = dp.cell_dofs(c);
    for (int i = 0; i < Ee.rows(); ++i)
      for (int j = 0; j < np; ++j) trip.emplace_back(ud[i], pd[j], Ee(i, j));
  }
  return from_triplets(du.n_dofs(), dp.n_dofs(), trip);
}

SparseMatrix assemble_div(const Mesh& mesh, const DofMap& dq, const DofMap& dp, QuadratureChoice qc) {
  require(mesh, dq, SpaceKind::Flux, "flux");
  require(mesh, dp, SpaceKind::Pressure, "pressure");
  const CellQuadrature q = tensor_gauss(mesh.dim(), default_n(qc, dq.order() + 2));
  const RTTable tq = tabulate(dq.rt_element(), q);
  const ScalarTable tp = tabulate(dp.scalar_element(), q);
  const int nq = dq.dofs_per_cell();
  const int np = dp.dofs_per_cell();
  std::vector<Triplet> trip;
  DenseMatrix Be(nq, np);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec3 h = cell_size(mesh, c);
    const double vol = mesh.cell(c).volume;
    Be.setZero();
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * vol;
      for (int i = 0; i < nq; ++i) {
        const double div = dq.sign(c, i) * tq.div(k, i) / h[tq.comp[i]];
        for (int j = 0; j < np; ++j) Be(i, j) -= w * div * tp.val(k, j);
      }
    }
    const auto qd = dq.cell_dofs(c);
    const auto pd = dp.cell_dofs(c);
    for (int i = 0; i < nq; ++i)
      for (int j = 0; j < np; ++j) trip.emplace_back(qd[i], pd[j], Be(i, j));
  }
  return from_triplets(dq.n_dofs(), dp.n_dofs(), trip);
}

MassMatrices assemble_masses(const Mesh& mesh, const DofMap& dq, const DofMap& dp, const CellMaterials& mat,
                             QuadratureChoice qc) {
  require(mesh, dq, SpaceKind::Flux, "flux");
  require(mesh, dp, SpaceKind::Pressure, "pressure");
  const int n = default_n(qc, dq.order() + 2);
  const CellQuadrature q = tensor_gauss(mesh.dim(), n);
  const RTTable tq = tabulate(dq.rt_element(), q);
  const ScalarTable tp = tabulate(dp.scalar_element(), q);
  const int nq = dq.dofs_per_cell();
  const int np = dp.dofs_per_cell();
  std::vector<Triplet> tmq, tmp, tinv;
  DenseMatrix Me(nq, nq), Pe(np, np);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const MaterialParams& m = mat.at(c);
    for (int a = 0; a < mesh.dim(); ++a)
      if (!(m.K[a] > 0.0) || !std::isfinite(m.K[a]))
        throw InvalidArgument("permeability of cell " + std::to_string(c) + " is singular");
    const double vol = mesh.cell(c).volume;
    Me.setZero();
    Pe.setZero();
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * vol;
      for (int i = 0; i < nq; ++i)
        for (int j = 0; j < nq; ++j)
          if (tq.comp[i] == tq.comp[j])
            Me(i, j) += w * m.eta / m.K[tq.comp[i]] * dq.sign(c, i) * dq.sign(c, j) * tq.val(k, i) * tq.val(k, j);
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < np; ++j) Pe(i, j) += w * tp.val(k, i) * tp.val(k, j);
    }
    const DenseMatrix Pinv = Pe.inverse();
    const auto qd = dq.cell_dofs(c);
    const auto pd = dp.cell_dofs(c);
    for (int i = 0; i < nq; ++i)
      for (int j = 0; j < nq; ++j)
        if (Me(i, j) != 0.0) tmq.emplace_back(qd[i], qd[j], Me(i, j));
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j) {
        tmp.emplace_back(pd[i], pd[j], Pe(i, j));
        tinv.emplace_back(pd[i], pd[j], Pinv(i, j));
      }
  }
  MassMatrices out;
  out.Mq = from_triplets(dq.n_dofs(), dq.n_dofs(), tmq);
  out.Mp = from_triplets(dp.n_dofs(), dp.n_dofs(), tmp);
  out.Mp_inv = from_triplets(dp.n_dofs(), dp.n_dofs(), tinv);
  return out;
}

InitialData assemble_initial(const Mesh& mesh, const DofMap& du, const DofMap& dp, const CellMaterials& mat,
                             const ReferenceState& ref, const BoundaryData& data) {
  require(mesh, du, SpaceKind::Displacement, "displacement");
  require(mesh, dp, SpaceKind::Pressure, "pressure");
  const int d = mesh.dim();
  InitialData out;
  out.U0 = Vector::Zero(du.n_dofs());
  for (int node = 0; node < du.n_nodes(); ++node) {
    const Vec3 v = ref.u0(du.support_point(d * node));
    for (int a = 0; a < d; ++a) out.U0[d * node + a] = v[a];
  }

  const CellQuadrature q = tensor_gauss(d, du.order() + 1);
  const ScalarTable tu = tabulate(du.scalar_element(), q);
  const ScalarTable tp = tabulate(dp.scalar_element(), q);
  const int ns = du.scalar_element().size();
  const int np = dp.dofs_per_cell();
  out.S0 = Vector::Zero(du.n_dofs());
  out.P0 = Vector::Zero(dp.n_dofs());
  DenseMatrix Pe(np, np);
  Vector rhs(np);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double vol = mesh.cell(c).volume;
    const double rho_b = mat.at(c).rho_b();
    const auto ud = du.cell_dofs(c);
    Pe.setZero();
    rhs.setZero();
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * vol;
      const Point x = mesh.to_physical(c, q.points[k]);
      if (data.gravity && rho_b != 0.0) {
        const Vec3 g = data.gravity(x, 0.0);
        for (int n = 0; n < ns; ++n)
          for (int a = 0; a < d; ++a) out.S0[ud[d * n + a]] += w * rho_b * g[a] * tu.val(k, n);
      }
      const double p0 = ref.p0(x);
      for (int i = 0; i < np; ++i) {
        rhs[i] += w * p0 * tp.val(k, i);
        for (int j = 0; j < np; ++j) Pe(i, j) += w * tp.val(k, i) * tp.val(k, j);
      }
    }
    const Vector coef = Pe.llt().solve(rhs);
    const auto pd = dp.cell_dofs(c);
    for (int i = 0; i < np; ++i) out.P0[pd[i]] = coef[i];
  }
  du.zero_constrained(out.S0);
  return out;
}

LoadVectors assemble_loads(const Mesh& mesh, const DofMap& du, const DofMap& dq, const DofMap& dp,
                           const CellMaterials& mat, const BoundaryData& data, double t) {
  require(mesh, du, SpaceKind::Displacement, "displacement");
  require(mesh, dq, SpaceKind::Flux, "flux");
  require(mesh, dp, SpaceKind::Pressure, "pressure");
  const int d = mesh.dim();
  LoadVectors L;
  L.t = t;
  L.TN = Vector::Zero(du.n_dofs());
  L.Gb = Vector::Zero(du.n_dofs());
  L.Gf = Vector::Zero(dq.n_dofs());
  L.PD = Vector::Zero(dq.n_dofs());
  L.F = Vector::Zero(dp.n_dofs());
  const int nquad = du.order() + 1;
  const int ns = du.scalar_element().size();

  if (data.gravity || data.source) {
    const CellQuadrature q = tensor_gauss(d, nquad);
    const ScalarTable tu = tabulate(du.scalar_element(), q);
    const RTTable tq = tabulate(dq.rt_element(), q);
    const ScalarTable tp = tabulate(dp.scalar_element(), q);
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const MaterialParams& m = mat.at(c);
      const double vol = mesh.cell(c).volume;
      const auto ud = du.cell_dofs(c);
      const auto qd = dq.cell_dofs(c);
      const auto pd = dp.cell_dofs(c);
      for (std::size_t k = 0; k < q.size(); ++k) {
        const double w = q.weights[k] * vol;
        const Point x = mesh.to_physical(c, q.points[k]);
        if (data.gravity) {
          const Vec3 g = data.gravity(x, t);
          if (m.rho_b() != 0.0)
            for (int n = 0; n < ns; ++n)
              for (int a = 0; a < d; ++a) L.Gb[ud[d * n + a]] += w * m.rho_b() * g[a] * tu.val(k, n);
          if (m.rho_f != 0.0)
            for (int i = 0; i < dq.dofs_per_cell(); ++i)
              L.Gf[qd[i]] += w * m.rho_f * g[tq.comp[i]] * dq.sign(c, i) * tq.val(k, i);
        }
        if (data.source) {
          const double f = data.source(x, t);
          for (int i = 0; i < dp.dofs_per_cell(); ++i) L.F[pd[i]] += w * f * tp.val(k, i);
        }
      }
    }
  }

  if ((data.traction || data.pressure) && mesh.tagged()) {
    const ScalarQ& su = du.scalar_element();
    const RaviartThomasQ& rt = dq.rt_element();
    for (int f = 0; f < mesh.n_faces(); ++f) {
      const Face& face = mesh.face(f);
      if (!face.is_boundary()) continue;
      const Side side = *face.boundary;
      const BoundaryTag& tag = mesh.tag(f);
      const int c = face.owner();
      const CellQuadrature q = face_gauss(d, side, nquad);
      const double outward = side_is_high(side) ? 1.0 : -1.0;
      bool any_traction = false;
      for (int a = 0; a < d; ++a) any_traction |= tag.mech[a] == MechBC::Traction;
      if (data.traction && any_traction) {
        const auto ud = du.cell_dofs(c);
        for (std::size_t k = 0; k < q.size(); ++k) {
          const double w = q.weights[k] * face.area;
          const Vec3 tn = data.traction(mesh.to_physical(c, q.points[k]), t, side);
          for (int n = 0; n < ns; ++n) {
            const double v = su.value(n, q.points[k]);
            if (v == 0.0) continue;
            for (int a = 0; a < d; ++a)
              if (tag.mech[a] == MechBC::Traction) L.TN[ud[d * n + a]] += w * tn[a] * v;
          }
        }
      }
      if (data.pressure && tag.flow == FlowBC::Pressure) {
        const auto qd = dq.cell_dofs(c);
        for (std::size_t k = 0; k < q.size(); ++k) {
          const double w = q.weights[k] * face.area;
          const double pD = data.pressure(mesh.to_physical(c, q.points[k]), t, side);
          for (int i = 0; i < rt.size(); ++i) {
            const auto& ld = rt.dof(i);
            if (ld.side != side) continue;
            L.PD[qd[i]] += w * pD * outward * dq.sign(c, i) * rt.value(i, q.points[k])[ld.component];
          }
        }
      }
    }
  }

  du.zero_constrained(L.TN);
  du.zero_constrained(L.Gb);
  dq.zero_constrained(L.Gf);
  dq.zero_constrained(L.PD);
  return L;
}

SparseMatrix apply_dirichlet(const SparseMatrix& A, const std::vector<char>& constrained) {
  if (static_cast<std::size_t>(A.rows()) != constrained.size() || A.rows() != A.cols())
    throw InvalidArgument("constraint mask does not match matrix");
  std::vector<Triplet> trip;
  trip.reserve(A.nonZeros());
  for (int r = 0; r < A.outerSize(); ++r) {
    if (constrained[r]) continue;
    for (SparseMatrix::InnerIterator it(A, r); it; ++it)
      if (!constrained[it.col()]) trip.emplace_back(r, it.col(), it.value());
  }
  for (int r = 0; r < A.rows(); ++r)
    if (constrained[r]) trip.emplace_back(r, r, 1.0);
  SparseMatrix out(A.rows(), A.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
  return out;
}

double initial_stress_mismatch(const Mesh& mesh, const DofMap& du, const ReferenceState& ref, const Vector& S0) {
  require(mesh, du, SpaceKind::Displacement, "displacement");
  const int d = mesh.dim();
  const CellQuadrature q = tensor_gauss(d, du.order() + 1);
  const ScalarTable tu = tabulate(du.scalar_element(), q);
  const int ns = du.scalar_element().size();
  Vector r = -S0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec3 h = cell_size(mesh, c);
    const double vol = mesh.cell(c).volume;
    const auto ud = du.cell_dofs(c);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * vol;
      const Mat3 s0 = ref.sigma0(mesh.to_physical(c, q.points[k]));
      for (int n = 0; n < ns; ++n)
        for (int a = 0; a < d; ++a) {
          double v = 0.0;
          for (int b = 0; b < d; ++b) v += s0(a, b) * tu.grad[b](k, n) / h[b];
          r[ud[d * n + a]] += w * v;
        }
    }
  }
  du.zero_constrained(r);
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace biot
