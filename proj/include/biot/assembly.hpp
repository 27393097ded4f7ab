#pragma once

#include <functional>

#include "biot/fespace.hpp"
#include "biot/material.hpp"
#include "biot/mesh.hpp"
#include "biot/types.hpp"

namespace biot {

/// Time-dependent data. Empty functions mean identically zero.
struct BoundaryData {
  /// Traction on traction-tagged components, given the side it acts on.
  std::function<Vec3(const Point&, double, Side)> traction;
  /// Pressure on pressure-tagged faces.
  std::function<double(const Point&, double, Side)> pressure;
  /// Gravitational acceleration g(x,t).
  std::function<Vec3(const Point&, double)> gravity;
  /// Volumetric fluid source f(x,t).
  std::function<double(const Point&, double)> source;
};

struct LoadVectors {
  double t = 0.0;
  Vector TN;  ///< traction (N_u)
  Vector Gb;  ///< bulk gravity (N_u)
  Vector Gf;  ///< fluid gravity (N_q)
  Vector PD;  ///< pressure boundary term (N_q)
  Vector F;   ///< source (N_p)
};

struct MassMatrices {
  SparseMatrix Mq;
  SparseMatrix Mp;
  SparseMatrix Mp_inv;
};

struct InitialData {
  Vector S0;  ///< gravity projection at t=0 (N_u)
  Vector U0;  ///< nodal interpolant of u_0
  Vector P0;  ///< cellwise L2 projection of p_0
};

/// Quadrature points per direction; 0 selects the default (displacement
/// order + 1, or flux order + 2 for the flow matrices).
struct QuadratureChoice {
  int n = 0;
};

SparseMatrix assemble_stiffness(const Mesh& mesh, const DofMap& du, const CellMaterials& mat, QuadratureChoice q = {});
SparseMatrix assemble_coupling(const Mesh& mesh, const DofMap& du, const DofMap& dp, QuadratureChoice q = {});
SparseMatrix assemble_div(const Mesh& mesh, const DofMap& dq, const DofMap& dp, QuadratureChoice q = {});
MassMatrices assemble_masses(const Mesh& mesh, const DofMap& dq, const DofMap& dp, const CellMaterials& mat,
                             QuadratureChoice q = {});

InitialData assemble_initial(const Mesh& mesh, const DofMap& du, const DofMap& dp, const CellMaterials& mat,
                             const ReferenceState& ref, const BoundaryData& data);

/// All load vectors at time t; entries at constrained dofs are zero.
LoadVectors assemble_loads(const Mesh& mesh, const DofMap& du, const DofMap& dq, const DofMap& dp,
                           const CellMaterials& mat, const BoundaryData& data, double t);

/// Symmetric elimination: constrained rows and columns zeroed, unit diagonal.
SparseMatrix apply_dirichlet(const SparseMatrix& A, const std::vector<char>& constrained);

/// max over free displacement dofs of |int eps(chi):sigma_0 - S_0|.
double initial_stress_mismatch(const Mesh& mesh, const DofMap& du, const ReferenceState& ref, const Vector& S0);

}  // namespace biot
