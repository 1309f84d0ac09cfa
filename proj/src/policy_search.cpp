#include "adsense/policy_search.hpp"

#include "adsense/errors.hpp"

#include <algorithm>
#include <cmath>

namespace adsense {

namespace {

constexpr double kSlack = 1e-9;

std::vector<double> steps_from(double lo, double hi, double step) {
    std::vector<double> out;
    for (std::size_t j = 0;; ++j) {
        const double v = lo + static_cast<double>(j) * step;
        if (v > hi + kSlack)
            break;
        out.push_back(v);
    }
    return out;
}

} // namespace

std::vector<LinearDurations> linear_lattice(const DurationBounds& bounds, double step) {
    if (!(step > 0.0))
        throw ConfigError("must be positive", "grid.duration_step");
    std::vector<LinearDurations> out;
    for (double a0 : steps_from(bounds.tx_min, bounds.tx_max, step))
        for (double a1 : steps_from(0.0, bounds.tx_max - a0, step))
            for (double b0 : steps_from(bounds.sense_min, bounds.sense_max, step))
                for (double b1 : steps_from(0.0, b0 - bounds.sense_min, step)) {
                    const LinearDurations c{a0, a1, b0, b1};
                    if (c.feasible(bounds))
                        out.push_back(c);
                }
    return out;
}

LinearSearchResult optimize_linear_policy(const Scenario& sc, const LinearSearchOptions& opts,
                                          std::shared_ptr<const OccupancyTable> occ) {
    sc.validate();
    const auto lattice = linear_lattice(sc.bounds, sc.grid.duration_step);
    if (lattice.empty())
        throw ConfigError("no linear coefficients satisfy the duration bounds", "bounds");
    if (!occ)
        occ = scenario_occupancy(sc);

    std::vector<double> scores(lattice.size());
    const auto n = static_cast<std::ptrdiff_t>(lattice.size());
    const std::size_t top = sc.grid.n_p - 1;

#pragma omp parallel
    {
        ValueTable values;
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t c = 0; c < n; ++c) {
            const auto idx = static_cast<std::size_t>(c);
            BeliefMdp mdp(sc, lattice[idx], occ);
            if (opts.objective == LinearObjective::ValueAtStart) {
                backward_induction_values(mdp, values);
                scores[idx] = values.at(top, 0);
            } else {
                auto shared = std::make_shared<const BeliefMdp>(mdp);
                auto sol = std::make_shared<const Solution>(backward_induction(*shared));
                scores[idx] = evaluate(greedy_policy(shared, sol), sc, *occ, opts.episodes, opts.seed)
                                  .mean_utility;
            }
        }
    }

    // Lattice order is lexicographic, so the first maximiser within rounding
    // noise is the lexicographically smallest one.
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        const double tol = 1e-12 * std::max(1.0, std::abs(scores[best]));
        if (scores[i] > scores[best] + tol)
            best = i;
    }
    return {lattice[best], scores[best], lattice.size()};
}

} // namespace adsense
