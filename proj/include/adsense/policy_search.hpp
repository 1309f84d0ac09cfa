#pragma once

// Exhaustive search for the best linear duration coefficients.

#include "adsense/sim.hpp"
#include "adsense/solver.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace adsense {

enum class LinearObjective { ValueAtStart, SimulatedMean };

struct LinearSearchOptions {
    LinearObjective objective = LinearObjective::ValueAtStart;
    std::size_t episodes = 1000;   ///< SimulatedMean only
    std::uint64_t seed = 1;        ///< SimulatedMean only
};

struct LinearSearchResult {
    LinearDurations coeffs;
    double score = 0.0;
    std::size_t candidates = 0;
};

/// Every (a0, a1, b0, b1) on the duration_step lattice that satisfies the
/// bounds, in lexicographic order.
std::vector<LinearDurations> linear_lattice(const DurationBounds& bounds, double step);

/// Scores each lattice point by backward induction in linear mode (U_s(1, 0))
/// or by the simulated mean utility of the resulting greedy policy, and returns
/// the lexicographically smallest maximiser. Throws ConfigError on an empty
/// lattice.
LinearSearchResult optimize_linear_policy(const Scenario& sc, const LinearSearchOptions& opts = {},
                                          std::shared_ptr<const OccupancyTable> occ = nullptr);

} // namespace adsense
