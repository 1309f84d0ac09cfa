#pragma once

// Column sweeps of the Bellman operator. Column k of `out` is computed from the
// continuation values in `future` (the same table during backward induction,
// the previous iterate during value iteration).

#include "adsense/solver.hpp"

namespace adsense {

/// OpenMP-parallel over the belief grid, using the candidate tables
/// precomputed in BeliefMdp.
void sweep_column(const BeliefMdp& mdp, const ValueTable& future, ValueTable& out,
                  PolicyTable* policy, std::size_t k);

/// Serial reference: one BeliefMdp::bellman_values call per grid point.
void sweep_column_reference(const BeliefMdp& mdp, const ValueTable& future, ValueTable& out,
                            PolicyTable* policy, std::size_t k);

} // namespace adsense
