#include "adsense/errors.hpp"
#include "adsense/policy_search.hpp"
#include "scenarios.hpp"

#include <doctest.h>

#include <algorithm>
#include <tuple>

using namespace adsense;
using namespace testing_scenarios;

namespace {

Scenario small_bounds(Scenario sc) {
    sc = coarse(sc);
    sc.bounds = DurationBounds{1.0, 6.0, 1.0, 3.0};
    return sc;
}

auto key(const LinearDurations& c) { return std::tuple(c.a0, c.a1, c.b0, c.b1); }

} // namespace

TEST_CASE("linear lattice") {
    SUBCASE("size and order for the default bounds") {
        const auto lat = linear_lattice(DurationBounds{}, 1.0);
        CHECK(lat.size() == 465 * 55);
        CHECK(std::is_sorted(lat.begin(), lat.end(),
                             [](const auto& a, const auto& b) { return key(a) < key(b); }));
        for (const auto& c : lat)
            CHECK(c.feasible(DurationBounds{}));
        CHECK(key(lat.front()) == std::tuple(1.0, 0.0, 1.0, 0.0));
    }
    SUBCASE("coarser step") {
        const auto lat = linear_lattice(DurationBounds{1.0, 6.0, 1.0, 3.0}, 2.0);
        // a0 in {1,3,5} with a1 up to 6 - a0; b0 in {1,3} with b1 up to b0 - 1.
        CHECK(lat.size() == (3 + 2 + 1) * (1 + 2));
    }
    SUBCASE("non-positive step") {
        CHECK_THROWS_AS(linear_lattice(DurationBounds{}, 0.0), ConfigError);
    }
}

TEST_CASE("optimize_linear_policy matches a brute-force scan") {
    for (const auto& base : {perfect_overhead(), imperfect_overhead()}) {
        for (double g : {0.0, 1.0}) {
            auto sc = small_bounds(base);
            sc.costs.gamma = g;
            const auto res = optimize_linear_policy(sc);
            CHECK(res.candidates == 21 * 6);

            LinearDurations best{};
            double best_v = -1e300;
            for (const auto& c : linear_lattice(sc.bounds, 1.0)) {
                const double v = backward_induction(sc, c).values.at(sc.grid.n_p - 1, 0);
                if (v > best_v + 1e-12 * std::max(1.0, std::abs(best_v))) {
                    best_v = v;
                    best = c;
                }
            }
            CHECK(res.coeffs == best);
            CHECK(res.score == doctest::Approx(best_v));
        }
    }
}

TEST_CASE("perfect sensing without overhead keeps the shortest durations") {
    for (double g : {0.0, 0.5, 1.0}) {
        auto sc = small_bounds(perfect_no_overhead());
        sc.costs.gamma = g;
        const auto res = optimize_linear_policy(sc);
        CHECK(res.coeffs == LinearDurations{1.0, 0.0, 1.0, 0.0});
    }
}

TEST_CASE("simulated-mean objective") {
    auto sc = perfect_no_overhead();
    sc = coarse(sc);
    sc.bounds = DurationBounds{1.0, 2.0, 1.0, 1.0};
    LinearSearchOptions opts;
    opts.objective = LinearObjective::SimulatedMean;
    opts.episodes = 200;
    opts.seed = 4;
    const auto a = optimize_linear_policy(sc, opts);
    const auto b = optimize_linear_policy(sc, opts);
    CHECK(a.candidates == 3);
    CHECK(a.coeffs == b.coeffs);
    CHECK(a.score == b.score);
}
