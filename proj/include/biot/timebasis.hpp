#pragma once

#include <span>
#include <string>
#include <vector>

#include "biot/types.hpp"

namespace biot {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// k-point Gauss-Legendre rule on [0,1].
QuadratureRule gauss_legendre(int k);

/// Lagrange polynomials on a node set, evaluated in barycentric form.
class LagrangeBasis1D {
 public:
  explicit LagrangeBasis1D(std::vector<double> nodes);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  double value(std::size_t i, double t) const;
  double derivative(std::size_t i, double t) const;
  /// All basis values at t.
  std::vector<double> values(double t) const;
  std::vector<double> derivatives(double t) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> bary_;
};

enum class TimeFamily { dG, cG };

struct TimeScheme {
  TimeFamily family = TimeFamily::dG;
  int order = 0;

  /// Number of coefficient vectors per slab (r+1 or q+1).
  int trial_count() const { return order + 1; }
  /// Number of unknown coefficient blocks per slab (r+1 for dG, q for cG).
  int unknown_blocks() const { return family == TimeFamily::dG ? order + 1 : order; }
  std::string label() const;
  bool operator==(const TimeScheme&) const = default;

  static TimeScheme dg(int r) { return {TimeFamily::dG, r}; }
  static TimeScheme cg(int q) { return {TimeFamily::cG, q}; }
};

/// Temporal couplings of one slab. Rows index test functions, columns trial
/// functions. For cG, column 0 is the slab-start node.
struct TimeCoupling {
  TimeScheme scheme;
  double tau = 0.0;
  DenseMatrix alpha;
  DenseMatrix beta;
  Vector gamma_minus;     ///< dG only
  DenseMatrix gamma_plus; ///< dG only
  std::vector<double> trial_nodes;
  std::vector<double> test_nodes;
};

TimeCoupling dg_time_matrices(int r, double tau);
TimeCoupling cg_time_matrices(int q, double tau);
TimeCoupling time_matrices(const TimeScheme& s, double tau);

/// Trial nodes on [0,1] of the scheme.
std::vector<double> trial_nodes(const TimeScheme& s);

/// Weights w_j such that the trial representation at t equals sum_j w_j c_j.
std::vector<double> trial_weights(const TimeScheme& s, double t);

/// Lagrange interpolation/extrapolation of the trial representation at t.
Vector eval_trial(const TimeScheme& s, std::span<const Vector> coeffs, double t);

struct TimeGrid {
  double T = 0.0;
  std::vector<double> bounds;         ///< t_0 = 0 < ... < t_N = T
  std::vector<TimeScheme> schemes;    ///< one per slab

  int n_slabs() const { return static_cast<int>(schemes.size()); }
  double tau(int n) const { return bounds[n + 1] - bounds[n]; }
  double max_tau() const;
  /// Absolute time of reference point t in slab n.
  double time_at(int n, double t) const { return bounds[n] + t * tau(n); }

  static TimeGrid uniform(double T, int N, const TimeScheme& s);
  /// dG(1) on the first slab, cG(1) on the remaining ones.
  static TimeGrid scheme1(double T, int N);
  void validate() const;
};

}  // namespace biot
