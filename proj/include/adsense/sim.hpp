#pragma once

// Monte Carlo episodes of the secondary user against sampled primary traffic.

#include "adsense/solver.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace adsense {

/// Decision rule evaluated at the current belief.
using Policy = std::function<Decision(const Belief&)>;

/// Argmax of bellman_values at the exact (off-grid) belief.
Policy greedy_policy(std::shared_ptr<const BeliefMdp> mdp, std::shared_ptr<const Solution> sol);

/// Decision stored at the nearest grid point.
Policy table_policy(std::shared_ptr<const BeliefMdp> mdp, std::shared_ptr<const Solution> sol);

/// The same action and duration at every belief.
Policy fixed_action_policy(Decision d);

enum class Observation { None, Free, Busy, Ack, Nack, Truncated };

const char* to_string(Observation o);

struct EpisodeEvent {
    double start_t;
    Action action;
    double duration;
    Observation observation;
    double reward;
    double p_before;
    double p_after;
};

struct EpisodeTrace {
    std::vector<EpisodeEvent> events;
    double total_utility = 0.0;
    double collision_time = 0.0;       ///< primary on-time inside secondary transmissions
    double successful_payload = 0.0;   ///< payload time of acknowledged transmissions
    double end_time = 0.0;
    ToggleList primary;
};

/// One episode from a busy-to-idle transition (p = 1, t = 0) until the primary's
/// next on-to-off transition or the grid horizon, whichever comes first. An
/// action still running at that point is cut short: its cost is pro-rated and it
/// earns no payload.
EpisodeTrace run_episode(const Policy& policy, const Scenario& sc, const OccupancyTable& occ,
                         std::uint64_t seed);

struct EvaluationSummary {
    std::size_t episodes = 0;
    double mean_utility = 0.0;
    double stderr_utility = 0.0;
    double ci95 = 0.0;                 ///< 1.96 stderr
    double collision_fraction = 0.0;   ///< collision time / total episode time
    double payload_fraction = 0.0;     ///< successful payload time / total episode time
    double mean_length = 0.0;
    std::array<std::size_t, 3> action_counts{};   ///< indexed by Action
};

/// Independent episodes; episode i uses a seed derived from (seed, i) so the
/// summary does not depend on thread scheduling. Requires n_episodes >= 100.
EvaluationSummary evaluate(const Policy& policy, const Scenario& sc, const OccupancyTable& occ,
                           std::size_t n_episodes, std::uint64_t seed);

std::uint64_t episode_seed(std::uint64_t root, std::uint64_t index);

/// `start_t,action,duration,observation,reward,p_before,p_after`
void write_trace_csv(std::ostream& os, const EpisodeTrace& trace);

} // namespace adsense
