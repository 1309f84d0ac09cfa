#pragma once

// Immediate rewards of the three secondary actions.

#include <string>
#include <vector>

namespace adsense {

struct TxChannelModel;

struct CostModel {
    double k_idle = 0.001;
    double k_sense = 0.1;
    double k_tx = 0.1;
    double reward_rate = 1.0;
    double overhead = 1.0;          ///< per-transmission time carrying no payload
    double c_collision_max = 20.0;
    double gamma = 0.5;             ///< 0 = maximal primary protection, 1 = no collision penalty

    /// Throws ConfigError naming the offending "costs.*" key.
    void validate() const;
};

double idle_reward(const CostModel& cm, double idle_time);
double sense_reward(const CostModel& cm, double sense_time);
/// C_C = C_Cmax (1 - gamma).
double collision_cost(const CostModel& cm);

/// Expected immediate reward of a transmission of length `tx_time` when the
/// primary is idle throughout with probability `idle_prob` (= p * q_T):
///   P(ACK) R (T_T - overhead) - (1 - idle_prob) C_C T_T - K_T T_T.
/// Throws ConfigError when tx_time <= overhead.
double tx_immediate_reward(const CostModel& cm, const TxChannelModel& ch, double p, double q_tx,
                           double tx_time);

/// Same as tx_immediate_reward but with the payload time clamped at zero, so a
/// transmission exactly as long as the overhead earns nothing. Used by the solver.
double tx_expected_reward(const CostModel& cm, const TxChannelModel& ch, double idle_prob,
                          double tx_time);

} // namespace adsense
