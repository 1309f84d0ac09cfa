#include "adsense/errors.hpp"
#include "adsense/sensing.hpp"

#include <doctest.h>

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

using namespace adsense;
using doctest::Approx;

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

// Q and Q^-1 evaluated in 50-digit arithmetic.
big q_big(big x) { return boost::math::erfc(x / boost::multiprecision::sqrt(big(2))) / 2; }
big q_inverse_big(big y) { return boost::multiprecision::sqrt(big(2)) * boost::math::erfc_inv(2 * y); }

double pfa_oracle(double p_d, double snr_db, double fs, double ts) {
    const big snr = boost::multiprecision::pow(big(10), big(snr_db) / 10);
    const big arg = boost::multiprecision::sqrt(2 * snr + 1) * q_inverse_big(big(p_d)) +
                    boost::multiprecision::sqrt(big(ts) * big(fs)) * snr;
    return static_cast<double>(q_big(arg));
}

} // namespace

TEST_CASE("q_function and its inverse") {
    CHECK(q_function(0.0) == Approx(0.5));
    CHECK(q_function(1.2815515655446004) == Approx(0.1).epsilon(1e-12));
    for (double y : {1e-12, 1e-6, 0.01, 0.1, 0.5, 0.9, 0.999999}) {
        CHECK(q_inverse(y) == Approx(static_cast<double>(q_inverse_big(big(y)))).epsilon(1e-9));
        CHECK(q_function(q_inverse(y)) == Approx(y).epsilon(1e-9));
    }
    CHECK_THROWS_AS(q_inverse(0.0), DomainError);
    CHECK_THROWS_AS(q_inverse(1.0), DomainError);
    CHECK_THROWS_AS(q_inverse(-0.2), DomainError);
}

TEST_CASE("dB conversions") {
    CHECK(db_to_linear(-25.0) == Approx(0.0031622776601683794));
    CHECK(linear_to_db(db_to_linear(-7.5)) == Approx(-7.5));
}

TEST_CASE("false alarm probability against the high-precision oracle") {
    const auto m = SensingModel::energy_detector(0.9, -25.0, 31250.0);
    CHECK(false_alarm_prob(m, 1.0) == Approx(0.766).epsilon(1e-3 / 0.766));
    CHECK(false_alarm_prob(m, 10.0) == Approx(0.315).epsilon(1e-3 / 0.315));
    for (double ts : {0.5, 1.0, 2.0, 5.0, 10.0, 30.0})
        CHECK(std::abs(false_alarm_prob(m, ts) - pfa_oracle(0.9, -25.0, 31250.0, ts)) < 1e-12);
}

TEST_CASE("false alarm probability decreases with sensing time") {
    const auto m = SensingModel::energy_detector(0.9, -25.0, 31250.0);
    double prev = 1.0;
    for (int ts = 1; ts <= 30; ++ts) {
        const double p = false_alarm_prob(m, ts);
        CHECK(p < prev);
        CHECK(p > 0.0);
        prev = p;
    }
}

TEST_CASE("perfect sensing") {
    const auto m = SensingModel::perfect_sensing();
    CHECK(false_alarm_prob(m, 1.0) == 0.0);
    CHECK(m.detection_prob() == 1.0);
    CHECK_THROWS_AS(false_alarm_prob(m, 0.0), DomainError);
}

TEST_CASE("sensing validation names the key") {
    try {
        SensingModel::energy_detector(1.0, -25.0, 31250.0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "sensing.p_d");
    }
    try {
        SensingModel::energy_detector(0.9, -25.0, 0.0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "sensing.sample_rate");
    }
}
