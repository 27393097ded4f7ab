#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "biot/assembly.hpp"
#include "biot/fespace.hpp"
#include "biot/linalg.hpp"
#include "biot/material.hpp"
#include "biot/mesh.hpp"

namespace biot {

/// Time-independent operators. Raw matrices carry no constraints; the
/// constrained variants are what the time-marching solves use.
struct SpatialOperators {
  SparseMatrix A_raw;   ///< stiffness
  SparseMatrix A;       ///< stiffness after symmetric elimination
  SparseMatrix E;       ///< div(chi) psi
  SparseMatrix B;       ///< -div(phi) psi
  SparseMatrix Mq_raw;  ///< eta K^-1 flux mass
  SparseMatrix Mq;      ///< flux mass, constrained rows/cols replaced by identity
  SparseMatrix Bc;      ///< B with constrained flux rows zeroed
  SparseMatrix Mp;
  SparseMatrix Mp_inv;
  Vector S0, U0, P0;

  // Cellwise material weights folded in (per pressure dof).
  Vector alpha_p;       ///< Biot coefficient
  Vector inv_M_p;       ///< 1/M
  SparseMatrix Ea;      ///< E diag(alpha_p)
  SparseMatrix EaT;     ///< transpose of Ea
  SparseMatrix Mp_M;    ///< diag(inv_M_p) Mp
};

/// A fully set-up spatial problem: tagged mesh, spaces, operators and data.
class BiotProblem {
 public:
  BiotProblem(Mesh tagged_mesh, int p, CellMaterials mat, ReferenceState ref, BoundaryData data);

  const Mesh& mesh() const { return mesh_; }
  int order() const { return p_; }
  const DofMap& du() const { return du_; }
  const DofMap& dq() const { return dq_; }
  const DofMap& dp() const { return dp_; }
  const CellMaterials& materials() const { return mat_; }
  const ReferenceState& reference() const { return ref_; }
  const BoundaryData& data() const { return data_; }
  const SpatialOperators& ops() const { return ops_; }

  /// Load vectors at time t; the most recent evaluations are cached.
  std::shared_ptr<const LoadVectors> loads(double t) const;
  /// Factorization of the constrained stiffness, computed once.
  const Factorization& stiffness_factor() const;

  /// Aggregate 1^T((1/M) Mp p + alpha E^T u).
  double mass_aggregate(const Vector& u, const Vector& p) const;

 private:
  Mesh mesh_;
  int p_;
  CellMaterials mat_;
  ReferenceState ref_;
  BoundaryData data_;
  DofMap du_, dq_, dp_;
  SpatialOperators ops_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::shared_ptr<const LoadVectors>> load_cache_;
  mutable std::optional<Factorization> a_fact_;
};

}  // namespace biot
