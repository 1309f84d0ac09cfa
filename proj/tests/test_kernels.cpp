#include "adsense/kernels.hpp"
#include "scenarios.hpp"

#include <doctest.h>

#include <cmath>

using namespace adsense;
using namespace testing_scenarios;

namespace {

// Backward induction driven by the serial reference sweep.
Solution reference_solution(const BeliefMdp& mdp) {
    Solution s{mdp.make_value_table(), mdp.make_policy_table()};
    for (std::size_t k = mdp.n_t(); k-- > 0;)
        sweep_column_reference(mdp, s.values, s.values, &s.policy, k);
    return s;
}

void compare(const BeliefMdp& mdp) {
    const auto fast = backward_induction(mdp);
    const auto ref = reference_solution(mdp);
    double worst = 0.0;
    std::size_t decision_mismatch = 0;
    for (std::size_t k = 0; k < mdp.n_t(); ++k)
        for (std::size_t i = 0; i < mdp.n_p(); ++i) {
            worst = std::max(worst, std::abs(fast.values.at(i, k) - ref.values.at(i, k)));
            if (!(fast.policy.at(i, k) == ref.policy.at(i, k))) {
                // Only acceptable on a numerical tie between two options.
                const auto av = mdp.bellman_values(ref.values, mdp.p_at(i), mdp.time_at(k));
                const double a = av.best_value();
                const auto d = fast.policy.at(i, k);
                const double chosen = d.action == Action::Idle    ? av.idle
                                      : d.action == Action::Sense ? av.sense
                                                                  : av.transmit;
                if (std::abs(a - chosen) > 1e-9 * std::max(1.0, std::abs(a)))
                    ++decision_mismatch;
            }
        }
    CHECK(worst < 1e-9);
    CHECK(decision_mismatch == 0);
}

} // namespace

TEST_CASE("parallel sweep matches the serial reference") {
    SUBCASE("fixed durations") {
        compare(BeliefMdp(coarse(perfect_overhead()), FixedDurations{20.0, 7.0}));
        compare(BeliefMdp(coarse(imperfect_overhead()), FixedDurations{3.0, 10.0}));
    }
    SUBCASE("per-state durations") {
        compare(BeliefMdp(coarse(perfect_no_overhead()), PerStateDurations{}));
        compare(BeliefMdp(coarse(imperfect_overhead()), PerStateDurations{}));
    }
    SUBCASE("linear durations") {
        compare(BeliefMdp(coarse(perfect_overhead()), LinearDurations{2.0, 13.0, 6.0, 3.0}));
        compare(BeliefMdp(coarse(imperfect_overhead()), LinearDurations{5.0, 20.0, 9.0, 7.0}));
    }
    SUBCASE("fractional durations on a finer time grid") {
        auto sc = coarse(perfect_no_overhead());
        sc.grid.dt = 0.5;
        sc.grid.duration_step = 0.75;
        sc.grid.t_horizon = 1000.0;
        compare(BeliefMdp(sc, PerStateDurations{}));
        compare(BeliefMdp(sc, LinearDurations{1.0, 2.3, 4.1, 1.7}));
    }
    SUBCASE("discounted, exponential traffic") {
        auto sc = coarse(imperfect_overhead());
        sc.traffic = {HoldDistribution::exponential(0.002), HoldDistribution::exponential(0.003)};
        sc.beta = 0.95;
        compare(BeliefMdp(sc, PerStateDurations{}));
    }
}

TEST_CASE("Jacobi sweep into a separate table") {
    auto sc = coarse(perfect_overhead());
    sc.beta = 0.9;
    const BeliefMdp mdp(sc, PerStateDurations{});
    ValueTable prev = mdp.make_value_table();
    for (std::size_t k = 0; k < mdp.n_t(); ++k)
        for (std::size_t i = 0; i < mdp.n_p(); ++i)
            prev.at(i, k) = 0.01 * static_cast<double>(i) - 0.001 * static_cast<double>(k);
    ValueTable a = mdp.make_value_table(), b = mdp.make_value_table();
    for (std::size_t k = 0; k < mdp.n_t(); ++k) {
        sweep_column(mdp, prev, a, nullptr, k);
        sweep_column_reference(mdp, prev, b, nullptr, k);
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < mdp.n_t(); ++k)
        for (std::size_t i = 0; i < mdp.n_p(); ++i)
            worst = std::max(worst, std::abs(a.at(i, k) - b.at(i, k)));
    CHECK(worst < 1e-9);
}
