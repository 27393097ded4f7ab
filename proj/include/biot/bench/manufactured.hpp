#pragma once

#include <functional>
#include <string>
#include <vector>

#include "biot/scheme.hpp"

namespace biot::bench {

/// Smooth exact solution on the unit square:
///   u = theta(t) sin(pi x) sin(pi y) (1, 1),  p = psi(t) cos(pi x) cos(pi y),
/// with body force and source obtained by substitution. Displacement is
/// clamped and pressure prescribed on the whole boundary.
struct TrigSolution {
  MaterialParams material;
  std::function<double(double)> theta, dtheta, psi, dpsi;

  static TrigSolution linear_in_time();
  static TrigSolution smooth_in_time();

  Vec3 u(const Point& x, double t) const;
  Mat3 grad_u(const Point& x, double t) const;
  double p(const Point& x, double t) const;
  Vec3 q(const Point& x, double t) const;
  Vec3 body_force(const Point& x, double t) const;
  double source(const Point& x, double t) const;

  BoundaryData data() const;
  ReferenceState reference() const;
  BoundarySpec boundary() const;
};

struct ConvergenceReport {
  std::string study;
  std::vector<double> parameter;  ///< h or tau per level
  std::vector<double> err_u, err_p, err_q;
  double order_u = 0.0, order_p = 0.0, order_q = 0.0;
};

/// Least-squares slope of log(err) against log(parameter).
double fitted_order(const std::vector<double>& parameter, const std::vector<double>& err);

/// L2 distance between a discrete field and a function on the mesh.
double l2_error_scalar(const Mesh& mesh, const DofMap& dp, const Vector& c,
                       const std::function<double(const Point&)>& exact);
double l2_error_vector(const Mesh& mesh, const DofMap& dm, const Vector& c,
                       const std::function<Vec3(const Point&)>& exact);

/// h-refinement on n x n meshes with the given time scheme and grid.
ConvergenceReport spatial_convergence(const TrigSolution& sol, const std::vector<int>& cells_per_side,
                                      const TimeScheme& scheme, double T, int N, const FixedStressConfig& cfg);

/// tau-refinement on one mesh against a reference computed with `ref_scheme`
/// on `ref_N` slabs.
ConvergenceReport temporal_convergence(const TrigSolution& sol, int cells_per_side, const TimeScheme& scheme,
                                       double T, const std::vector<int>& slabs, const TimeScheme& ref_scheme,
                                       int ref_N, const FixedStressConfig& cfg);

/// Default study: spatial orders with dG(1) and temporal orders with dG(0)
/// and cG(1).
std::vector<ConvergenceReport> manufactured_convergence();

}  // namespace biot::bench
