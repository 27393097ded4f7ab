#include "biot/problem.hpp"

#include "biot/errors.hpp"

namespace biot {

namespace {

SparseMatrix diag(const Vector& v) {
  SparseMatrix D(v.size(), v.size());
  std::vector<Triplet> t;
  for (int i = 0; i < v.size(); ++i) t.emplace_back(i, i, v[i]);
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

SparseMatrix zero_rows(const SparseMatrix& M, const std::vector<char>& mask) {
  std::vector<Triplet> t;
  for (int r = 0; r < M.outerSize(); ++r) {
    if (mask[r]) continue;
    for (SparseMatrix::InnerIterator it(M, r); it; ++it) t.emplace_back(r, it.col(), it.value());
  }
  SparseMatrix out(M.rows(), M.cols());
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

}  // namespace

BiotProblem::BiotProblem(Mesh tagged_mesh, int p, CellMaterials mat, ReferenceState ref, BoundaryData data)
    : mesh_(std::move(tagged_mesh)), p_(p), mat_(std::move(mat)), ref_(std::move(ref)), data_(std::move(data)) {
  if (!mesh_.tagged()) throw InvalidArgument("problem needs a mesh with boundary tags");
  mat_.validate();
  du_ = build_displacement_space(mesh_, p);
  dq_ = build_flux_space(mesh_, p - 1);
  dp_ = build_pressure_space(mesh_, p - 1);

  ops_.A_raw = assemble_stiffness(mesh_, du_, mat_);
  ops_.A = apply_dirichlet(ops_.A_raw, du_.constraint_mask());
  ops_.E = assemble_coupling(mesh_, du_, dp_);
  ops_.B = assemble_div(mesh_, dq_, dp_);
  MassMatrices mm = assemble_masses(mesh_, dq_, dp_, mat_);
  ops_.Mq_raw = std::move(mm.Mq);
  ops_.Mp = std::move(mm.Mp);
  ops_.Mp_inv = std::move(mm.Mp_inv);
  ops_.Mq = apply_dirichlet(ops_.Mq_raw, dq_.constraint_mask());
  ops_.Bc = zero_rows(ops_.B, dq_.constraint_mask());
  InitialData init = assemble_initial(mesh_, du_, dp_, mat_, ref_, data_);
  ops_.S0 = std::move(init.S0);
  ops_.U0 = std::move(init.U0);
  ops_.P0 = std::move(init.P0);

  ops_.alpha_p.resize(dp_.n_dofs());
  ops_.inv_M_p.resize(dp_.n_dofs());
  for (int c = 0; c < mesh_.n_cells(); ++c)
    for (int g : dp_.cell_dofs(c)) {
      ops_.alpha_p[g] = mat_.at(c).alpha_b;
      ops_.inv_M_p[g] = mat_.at(c).inv_M();
    }
  ops_.Ea = ops_.E * diag(ops_.alpha_p);
  ops_.Ea.makeCompressed();
  ops_.EaT = ops_.Ea.transpose();
  ops_.Mp_M = diag(ops_.inv_M_p) * ops_.Mp;
  ops_.Mp_M.makeCompressed();
}

std::shared_ptr<const LoadVectors> BiotProblem::loads(double t) const {
  std::lock_guard lock(mutex_);
  auto it = load_cache_.find(t);
  if (it != load_cache_.end()) return it->second;
  if (load_cache_.size() >= 8) load_cache_.erase(load_cache_.begin());
  auto L = std::make_shared<const LoadVectors>(assemble_loads(mesh_, du_, dq_, dp_, mat_, data_, t));
  load_cache_.emplace(t, L);
  return L;
}

const Factorization& BiotProblem::stiffness_factor() const {
  std::lock_guard lock(mutex_);
  if (!a_fact_) a_fact_ = factor(ops_.A, MatrixKind::SPD);
  return *a_fact_;
}

double BiotProblem::mass_aggregate(const Vector& u, const Vector& p) const {
  return (ops_.Mp_M * p + ops_.EaT * u).sum();
}

}  // namespace biot
