#pragma once

// Energy-detector reliability: false-alarm probability as a function of the
// sensing duration at a fixed target detection probability.

namespace adsense {

/// Gaussian tail Q(x) = erfc(x / sqrt 2) / 2.
double q_function(double x);

/// Inverse of q_function on (0, 1). Throws DomainError at or outside the endpoints.
double q_inverse(double y);

double db_to_linear(double db);
double linear_to_db(double linear);

struct SensingModel {
    double p_d = 0.9;             ///< target detection probability
    double snr = 1.0;             ///< linear received SNR
    double sample_rate = 1.0;     ///< samples per time unit
    bool perfect = false;         ///< P_fa = 0 and P_d = 1 regardless of duration

    static SensingModel perfect_sensing();
    static SensingModel energy_detector(double p_d, double snr_db, double sample_rate);

    /// Throws ConfigError naming the offending "sensing.*" key.
    void validate() const;

    double detection_prob() const noexcept { return perfect ? 1.0 : p_d; }
};

/// P_fa(T_S) = Q( sqrt(2 snr + 1) Q^-1(P_d) + sqrt(T_S f_s) snr ).
double false_alarm_prob(const SensingModel& model, double sense_time);

} // namespace adsense
