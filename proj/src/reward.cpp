#include "adsense/reward.hpp"

#include "adsense/belief.hpp"
#include "adsense/errors.hpp"

#include <algorithm>
#include <string>

namespace adsense {

void CostModel::validate() const {
    const std::pair<const char*, double> rates[] = {
        {"costs.k_idle", k_idle},   {"costs.k_sense", k_sense},
        {"costs.k_tx", k_tx},       {"costs.reward", reward_rate},
        {"costs.overhead", overhead}, {"costs.c_collision_max", c_collision_max},
    };
    for (const auto& [key, v] : rates)
        if (!(v >= 0.0))
            throw ConfigError("must be non-negative", key);
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw ConfigError("must lie in [0, 1]", "costs.gamma");
}

double idle_reward(const CostModel& cm, double idle_time) { return -cm.k_idle * idle_time; }

double sense_reward(const CostModel& cm, double sense_time) { return -cm.k_sense * sense_time; }

double collision_cost(const CostModel& cm) { return cm.c_collision_max * (1.0 - cm.gamma); }

double tx_expected_reward(const CostModel& cm, const TxChannelModel& ch, double idle_prob,
                          double tx_time) {
    const double ack = idle_prob * (1.0 - ch.p_nc) + (1.0 - idle_prob) * (1.0 - ch.p_c);
    const double payload = std::max(0.0, tx_time - cm.overhead);
    return ack * cm.reward_rate * payload - (1.0 - idle_prob) * collision_cost(cm) * tx_time -
           cm.k_tx * tx_time;
}

double tx_immediate_reward(const CostModel& cm, const TxChannelModel& ch, double p, double q_tx,
                           double tx_time) {
    if (!(tx_time > cm.overhead))
        throw ConfigError("transmission time " + std::to_string(tx_time) +
                          " must exceed the overhead " + std::to_string(cm.overhead));
    return tx_expected_reward(cm, ch, p * q_tx, tx_time);
}

} // namespace adsense
