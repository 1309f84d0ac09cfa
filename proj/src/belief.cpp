#include "adsense/belief.hpp"

#include "adsense/errors.hpp"

#include <stdexcept>
#include <string>

namespace adsense {

void TxChannelModel::validate() const {
    if (!(p_nc >= 0.0 && p_nc <= 1.0))
        throw ConfigError("must lie in [0, 1]", "channel.p_nc");
    if (!(p_c >= 0.0 && p_c <= 1.0))
        throw ConfigError("must lie in [0, 1]", "channel.p_c");
    if (p_c < p_nc)
        throw ConfigError("NACK probability under collision must be at least p_nc", "channel.p_c");
}

Belief update_idle(const Belief& b, double idle_time, const OccupancyTable& occ) {
    if (!(idle_time > 0.0))
        throw DomainError("update_idle: idle time must be positive");
    if (b.t + idle_time > occ.horizon() + 1e-9)
        throw HorizonError("update_idle: t + T_I = " + std::to_string(b.t + idle_time) +
                           " beyond occupancy horizon " + std::to_string(occ.horizon()));
    const double p = b.p * occ.p00_at(idle_time) + (1.0 - b.p) * occ.p10_at(idle_time);
    return {p, b.t + idle_time};
}

namespace {

Branches sense_branches(const Belief& b, double sense_time, const SensingModel& sm,
                        const HoldDistribution& off_dist) {
    const double x = b.p * q_remain(off_dist, b.t, sense_time).prob;
    return split_belief(x, 1.0 - false_alarm_prob(sm, sense_time), 1.0 - sm.detection_prob());
}

Branches tx_branches(const Belief& b, double tx_time, const TxChannelModel& ch,
                     const HoldDistribution& off_dist) {
    const double x = b.p * q_remain(off_dist, b.t, tx_time).prob;
    return split_belief(x, 1.0 - ch.p_nc, 1.0 - ch.p_c);
}

double conditioned(double weight, double posterior, const char* what) {
    if (!(weight > 0.0))
        throw std::logic_error(std::string("conditioning on a zero-probability ") + what);
    return posterior;
}

} // namespace

OutcomeProbs sense_outcome_probs(const Belief& b, double sense_time, const SensingModel& sm,
                                 const HoldDistribution& off_dist) {
    const auto br = sense_branches(b, sense_time, sm, off_dist);
    return {br.w_first, br.w_second};
}

Belief update_sense(const Belief& b, double sense_time, SenseOutcome outcome,
                    const SensingModel& sm, const HoldDistribution& off_dist) {
    const auto br = sense_branches(b, sense_time, sm, off_dist);
    const double p = outcome == SenseOutcome::Free
                         ? conditioned(br.w_first, br.post_first, "Free sensing outcome")
                         : conditioned(br.w_second, br.post_second, "Busy sensing outcome");
    return {p, b.t + sense_time};
}

OutcomeProbs tx_outcome_probs(const Belief& b, double tx_time, const TxChannelModel& ch,
                              const HoldDistribution& off_dist) {
    const auto br = tx_branches(b, tx_time, ch, off_dist);
    return {br.w_first, br.w_second};
}

Belief update_tx(const Belief& b, double tx_time, TxOutcome outcome, const TxChannelModel& ch,
                 const HoldDistribution& off_dist) {
    const auto br = tx_branches(b, tx_time, ch, off_dist);
    const double p = outcome == TxOutcome::Ack ? conditioned(br.w_first, br.post_first, "ACK")
                                               : conditioned(br.w_second, br.post_second, "NACK");
    return {p, b.t + tx_time};
}

} // namespace adsense
