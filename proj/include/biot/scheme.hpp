#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "biot/linalg.hpp"
#include "biot/problem.hpp"
#include "biot/timebasis.hpp"

namespace biot {

struct FixedStressConfig {
  /// Tuning modulus; unset means lambda + 2 mu of each cell.
  std::optional<double> K_dr_star;
  /// Stop when the relative sup-norm changes of p and u are <= tol and, if the
  /// observed contraction rate rho is >= 1/2, also rho/(1-rho) * change <= tol.
  double tol = 1e-6;
  int max_iterations = 100;
  /// A converged slab whose coupled mass residual exceeds
  /// residual_factor * tol (relative) is rejected as non-converged.
  double residual_factor = 1e3;
};

/// Data at the start of a slab: the left limits for dG, the j=0 coefficients
/// for cG.
struct SlabInit {
  Vector u;
  Vector q;
  Vector p;
};

struct SlabSolution {
  int slab = 0;
  TimeScheme scheme;
  double t0 = 0.0;
  double tau = 0.0;
  /// One entry per trial node; for cG, entry 0 is the fixed slab-start data.
  std::vector<Vector> u, q, p;
  int iterations = 0;
  std::vector<double> change_p, change_u;
  double mass_residual = 0.0;
};

/// Per-slab fixed-stress solves sharing the time-independent operators.
class FixedStressSolver {
 public:
  FixedStressSolver(const BiotProblem& problem, FixedStressConfig cfg);

  const BiotProblem& problem() const { return problem_; }
  const FixedStressConfig& config() const { return cfg_; }
  /// 1/M + alpha^2/K_dr* per pressure dof.
  const Vector& rho_p() const { return rho_p_; }
  /// alpha^2/K_dr* per pressure dof.
  const Vector& stab_p() const { return stab_p_; }

  /// Loads at the trial nodes of a slab.
  std::vector<std::shared_ptr<const LoadVectors>> slab_loads(const TimeCoupling& tc, double t0) const;

  /// Flow block system for a slab (cached by scheme and length).
  const BlockSystem& flow_system(const TimeCoupling& tc) const;

  /// One (H) step for dG: returns q_j, p_j for j = 0..r.
  std::pair<std::vector<Vector>, std::vector<Vector>> solve_flow_dg(
      const TimeCoupling& tc, const std::vector<std::shared_ptr<const LoadVectors>>& loads, const SlabInit& init,
      const std::vector<Vector>& u_prev, const std::vector<Vector>& p_prev) const;
  /// One (M) step for dG: u_j for j = 0..r.
  std::vector<Vector> solve_mech_dg(const TimeCoupling& tc,
                                    const std::vector<std::shared_ptr<const LoadVectors>>& loads,
                                    const std::vector<Vector>& p) const;
  /// (H) for cG: entries 1..q are new, entry 0 is copied from init.
  std::pair<std::vector<Vector>, std::vector<Vector>> solve_flow_cg(
      const TimeCoupling& tc, const std::vector<std::shared_ptr<const LoadVectors>>& loads, const SlabInit& init,
      const std::vector<Vector>& u_prev, const std::vector<Vector>& p_prev) const;
  /// (M) for cG: entries 1..q new, entry 0 = init.u.
  std::vector<Vector> solve_mech_cg(const TimeCoupling& tc,
                                    const std::vector<std::shared_ptr<const LoadVectors>>& loads,
                                    const std::vector<Vector>& p, const Vector& u_init) const;

  /// Iterates (H),(M) to convergence on slab n = [t0, t0 + tau].
  SlabSolution fixed_stress_slab(int n, const TimeScheme& scheme, double t0, double tau, const SlabInit& init) const;

  /// Relative residual of the coupled mass equations at a slab solution.
  double coupled_mass_residual(const TimeCoupling& tc, const std::vector<std::shared_ptr<const LoadVectors>>& loads,
                               const SlabInit& init, const SlabSolution& sol) const;

  /// Darcy flux consistent with P0 and the data at t.
  Vector consistent_initial_flux(double t) const;

  /// Initial state (U0, consistent flux at 0, P0).
  SlabInit initial_state() const;

 private:
  const BiotProblem& problem_;
  FixedStressConfig cfg_;
  Vector rho_p_, stab_p_;
  SparseMatrix Mp_rho_, Mp_stab_;
  bool decoupled_ = false;
  int threads_ = 1;
  mutable std::mutex mutex_;
  mutable std::map<std::tuple<int, int, double>, std::unique_ptr<BlockSystem>> systems_;
};

/// Slab-end values (trial representation at t = 1) as the next slab's start.
SlabInit transfer_state(const SlabSolution& sol);

struct MarchRecord {
  int slab = 0;
  double t_end = 0.0;
  double wall_seconds = 0.0;
};

struct Trajectory {
  std::vector<SlabSolution> slabs;  ///< kept only when requested
  std::vector<SlabInit> ends;       ///< slab-end states, kept only when requested
  SlabInit final_state;
  std::vector<int> iterations;
};

using SlabObserver = std::function<void(const SlabSolution&, const SlabInit& end, const MarchRecord&)>;

/// Marches all slabs in order. Throws NonConvergenceError with the slab index
/// on the first slab that fails.
Trajectory march(const FixedStressSolver& solver, const TimeGrid& grid, const SlabObserver& observer = {},
                 bool keep = false, std::optional<SlabInit> start = std::nullopt);

}  // namespace biot
