#include "adsense/belief.hpp"
#include "adsense/errors.hpp"
#include "adsense/reward.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace adsense;
using doctest::Approx;

namespace {

const auto kUniform = HoldDistribution::uniform(1000.0);

// Bayes by enumerating the joint (stays idle?, observation) table.
struct Joint {
    double idle_first, idle_second, busy_first, busy_second;
    double w_first() const { return idle_first + busy_first; }
    double post_first() const { return idle_first / w_first(); }
    double post_second() const { return idle_second / (idle_second + busy_second); }
};

Joint joint(double p_idle, double first_if_idle, double first_if_busy) {
    return {p_idle * first_if_idle, p_idle * (1 - first_if_idle), (1 - p_idle) * first_if_busy,
            (1 - p_idle) * (1 - first_if_busy)};
}

} // namespace

TEST_CASE("rewards") {
    const CostModel cm;
    const TxChannelModel ch;
    CHECK(idle_reward(cm, 5.0) == Approx(-0.005));
    CHECK(sense_reward(cm, 1.0) == Approx(-0.1));
    CHECK(collision_cost(cm) == Approx(10.0));
    SUBCASE("transmission at p q = 0 pays the full collision cost") {
        CHECK(tx_expected_reward(cm, ch, 0.0, 1.0) == Approx(-10.1));
    }
    SUBCASE("certain success") {
        CHECK(tx_immediate_reward(cm, ch, 1.0, 1.0, 10.0) == Approx(9.0 - 1.0));
    }
    SUBCASE("gamma = 1 removes the collision penalty") {
        CostModel g1 = cm;
        g1.gamma = 1.0;
        CHECK(tx_expected_reward(g1, ch, 0.0, 2.0) == Approx(-0.2));
    }
    SUBCASE("overhead-length transmissions") {
        CHECK_THROWS_AS(tx_immediate_reward(cm, ch, 1.0, 1.0, 1.0), ConfigError);
        CHECK(tx_expected_reward(cm, ch, 1.0, 1.0) == Approx(-0.1));
    }
    SUBCASE("linear in the idle probability") {
        const TxChannelModel noisy{0.1, 0.8};
        const double a = tx_expected_reward(cm, noisy, 0.0, 7.0);
        const double b = tx_expected_reward(cm, noisy, 1.0, 7.0);
        for (double x : {0.1, 0.37, 0.9})
            CHECK(tx_expected_reward(cm, noisy, x, 7.0) == Approx(a + x * (b - a)));
    }
}

TEST_CASE("cost and channel validation") {
    CostModel cm;
    cm.gamma = 1.5;
    CHECK_THROWS_AS(cm.validate(), ConfigError);
    TxChannelModel ch{0.5, 0.2};
    try {
        ch.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "channel.p_c");
    }
}

TEST_CASE("sensing update matches direct enumeration") {
    const auto sm = SensingModel::energy_detector(0.9, -25.0, 31250.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pd(0.01, 0.99), td(0.0, 950.0);
    for (int i = 0; i < 100; ++i) {
        const Belief b{pd(rng), td(rng)};
        const double ts = 1.0 + i % 10;
        const double x = b.p * (1000.0 - b.t - ts) / (1000.0 - b.t);
        const auto j = joint(x, 1.0 - false_alarm_prob(sm, ts), 0.1);
        const auto w = sense_outcome_probs(b, ts, sm, kUniform);
        CHECK(w.first == Approx(j.w_first()));
        CHECK(w.first + w.second == Approx(1.0));
        CHECK(update_sense(b, ts, SenseOutcome::Free, sm, kUniform).p == Approx(j.post_first()));
        CHECK(update_sense(b, ts, SenseOutcome::Busy, sm, kUniform).p == Approx(j.post_second()));
        CHECK(update_sense(b, ts, SenseOutcome::Busy, sm, kUniform).t == Approx(b.t + ts));
        // Posteriors average back to the persistence-weighted prior.
        CHECK(w.first * update_sense(b, ts, SenseOutcome::Free, sm, kUniform).p +
                  w.second * update_sense(b, ts, SenseOutcome::Busy, sm, kUniform).p ==
              Approx(x));
    }
}

TEST_CASE("perfect sensing collapses the belief") {
    const auto sm = SensingModel::perfect_sensing();
    const Belief b{0.6, 100.0};
    CHECK(update_sense(b, 5.0, SenseOutcome::Free, sm, kUniform).p == Approx(1.0));
    CHECK(update_sense(b, 5.0, SenseOutcome::Busy, sm, kUniform).p == 0.0);
    SUBCASE("p = 0: only the Busy branch exists") {
        const Belief zero{0.0, 100.0};
        const auto w = sense_outcome_probs(zero, 5.0, sm, kUniform);
        CHECK(w.first == 0.0);
        CHECK(w.second == 1.0);
        CHECK_THROWS_AS(update_sense(zero, 5.0, SenseOutcome::Free, sm, kUniform), std::logic_error);
    }
}

TEST_CASE("transmission update") {
    SUBCASE("ideal channel: NACK means collision") {
        const TxChannelModel ch{0.0, 1.0};
        const Belief b{0.8, 200.0};
        CHECK(update_tx(b, 7.0, TxOutcome::Ack, ch, kUniform).p == Approx(1.0));
        CHECK(update_tx(b, 7.0, TxOutcome::Nack, ch, kUniform).p == 0.0);
        CHECK(tx_outcome_probs(b, 7.0, ch, kUniform).first == Approx(0.8 * 793.0 / 800.0));
    }
    SUBCASE("noisy channel matches enumeration") {
        const TxChannelModel ch{0.1, 0.7};
        const Belief b{0.5, 300.0};
        const double x = 0.5 * (1000.0 - 310.0) / 700.0;
        const auto j = joint(x, 0.9, 0.3);
        CHECK(update_tx(b, 10.0, TxOutcome::Ack, ch, kUniform).p == Approx(j.post_first()));
        CHECK(update_tx(b, 10.0, TxOutcome::Nack, ch, kUniform).p == Approx(j.post_second()));
    }
    SUBCASE("past the idle support ACK is impossible") {
        const TxChannelModel ch{0.0, 1.0};
        CHECK_THROWS_AS(update_tx({1.0, 1000.0}, 5.0, TxOutcome::Ack, ch, kUniform),
                        std::logic_error);
    }
}

TEST_CASE("idle update uses the occupancy table") {
    const TrafficModel m{kUniform, kUniform};
    const auto occ = solve_occupancy(m, 1.0, 1000.0);
    CHECK(update_idle({1.0, 0.0}, 5.0, occ).p == Approx(occ.p00_at(5.0)));
    CHECK(update_idle({0.0, 0.0}, 5.0, occ).p == Approx(occ.p10_at(5.0)));
    CHECK(update_idle({0.3, 10.0}, 5.0, occ).p ==
          Approx(0.3 * occ.p00_at(5.0) + 0.7 * occ.p10_at(5.0)));
    CHECK(update_idle({0.3, 10.0}, 5.0, occ).t == Approx(15.0));
    CHECK_THROWS_AS(update_idle({0.3, 998.0}, 5.0, occ), HorizonError);
}
