#pragma once

#include "biot/scheme.hpp"

namespace biot::bench {

/// Largest coupled slab system the oracle accepts.
inline constexpr int kMonolithicMaxDofs = 5000;

/// Direct solve of the unsplit slab equations (mechanics, Darcy and mass rows
/// assembled as one sparse system). Uses the solver only for its operators.
SlabSolution monolithic_oracle(const FixedStressSolver& solver, const TimeScheme& scheme, double t0, double tau,
                               const SlabInit& init);

}  // namespace biot::bench
