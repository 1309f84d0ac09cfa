#include "adsense/sensing.hpp"

#include "adsense/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace adsense {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inverse(double y) {
    if (!(y > 0.0 && y < 1.0))
        throw DomainError("q_inverse: argument must lie in (0, 1), got " + std::to_string(y));
    // Q is strictly decreasing; bisect on the comparison alone so the tails keep
    // full relative precision.
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break;
        if (q_function(mid) > y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

SensingModel SensingModel::perfect_sensing() {
    SensingModel m;
    m.perfect = true;
    return m;
}

SensingModel SensingModel::energy_detector(double p_d, double snr_db, double sample_rate) {
    SensingModel m;
    m.p_d = p_d;
    m.snr = db_to_linear(snr_db);
    m.sample_rate = sample_rate;
    m.perfect = false;
    m.validate();
    return m;
}

void SensingModel::validate() const {
    if (perfect)
        return;
    if (!(p_d > 0.0 && p_d < 1.0))
        throw ConfigError("detection probability must lie in (0, 1)", "sensing.p_d");
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw ConfigError("SNR must be positive", "sensing.snr_db");
    if (!(sample_rate > 0.0))
        throw ConfigError("sample rate must be positive", "sensing.sample_rate");
}

double false_alarm_prob(const SensingModel& model, double sense_time) {
    if (!(sense_time > 0.0))
        throw DomainError("false_alarm_prob: sensing time must be positive, got " +
                          std::to_string(sense_time));
    if (model.perfect)
        return 0.0;
    const double arg = std::sqrt(2.0 * model.snr + 1.0) * q_inverse(model.p_d) +
                       std::sqrt(sense_time * model.sample_rate) * model.snr;
    return q_function(arg);
}

} // namespace adsense
