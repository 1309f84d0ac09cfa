#pragma once

// Bayesian belief kernel: observation probabilities and posteriors for the
// idle, sense and transmit actions.

#include "adsense/sensing.hpp"
#include "adsense/traffic.hpp"

namespace adsense {

/// DP state: belief that the primary is idle, and time since the detected
/// busy-to-idle transition.
struct Belief {
    double p = 1.0;
    double t = 0.0;
};

struct TxChannelModel {
    double p_nc = 0.0;  ///< NACK although no collision
    double p_c = 1.0;   ///< NACK given a collision

    /// Requires both in [0, 1] and p_c >= p_nc.
    void validate() const;
};

enum class SenseOutcome { Free, Busy };
enum class TxOutcome { Ack, Nack };

/// Probabilities of the two observations of an action. Sums to one.
struct OutcomeProbs {
    double first = 0.0;   ///< Free or Ack
    double second = 0.0;  ///< Busy or Nack
};

/// Both observation probabilities and both posteriors of a binary-outcome
/// action, given the probability `x = p * q` that the primary stays idle over the
/// action and the per-state likelihoods of the first outcome. A posterior whose
/// outcome has zero probability is reported as 0.
struct Branches {
    double w_first;
    double w_second;
    double post_first;
    double post_second;
};

/// first-outcome likelihood is `first_if_idle` when the primary stays idle and
/// `first_if_not` otherwise.
inline Branches split_belief(double x, double first_if_idle, double first_if_not) noexcept {
    const double idle_first = x * first_if_idle;
    const double idle_second = x * (1.0 - first_if_idle);
    const double w_first = idle_first + (1.0 - x) * first_if_not;
    const double w_second = idle_second + (1.0 - x) * (1.0 - first_if_not);
    return {w_first, w_second, w_first > 0.0 ? idle_first / w_first : 0.0,
            w_second > 0.0 ? idle_second / w_second : 0.0};
}

/// E_I(p) = p P00(T_I) + (1 - p) P10(T_I). Throws HorizonError when
/// b.t + idle_time exceeds the table horizon.
Belief update_idle(const Belief& b, double idle_time, const OccupancyTable& occ);

OutcomeProbs sense_outcome_probs(const Belief& b, double sense_time, const SensingModel& sm,
                                 const HoldDistribution& off_dist);

/// Posterior after a sensing observation. Throws std::logic_error when the
/// outcome has zero probability.
Belief update_sense(const Belief& b, double sense_time, SenseOutcome outcome,
                    const SensingModel& sm, const HoldDistribution& off_dist);

OutcomeProbs tx_outcome_probs(const Belief& b, double tx_time, const TxChannelModel& ch,
                              const HoldDistribution& off_dist);

Belief update_tx(const Belief& b, double tx_time, TxOutcome outcome, const TxChannelModel& ch,
                 const HoldDistribution& off_dist);

} // namespace adsense
