#include "adsense/sim.hpp"

#include "adsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace adsense {

Policy greedy_policy(std::shared_ptr<const BeliefMdp> mdp, std::shared_ptr<const Solution> sol) {
    if (!mdp || !sol)
        throw std::invalid_argument("greedy_policy: null model or solution");
    return [mdp = std::move(mdp), sol = std::move(sol)](const Belief& b) {
        return mdp->bellman_values(sol->values, std::clamp(b.p, 0.0, 1.0), b.t).best();
    };
}

Policy table_policy(std::shared_ptr<const BeliefMdp> mdp, std::shared_ptr<const Solution> sol) {
    if (!mdp || !sol)
        throw std::invalid_argument("table_policy: null model or solution");
    return [mdp = std::move(mdp), sol = std::move(sol)](const Belief& b) {
        if (!(b.p >= 0.0 && b.p <= 1.0) || !(b.t >= 0.0))
            throw std::logic_error("table_policy: belief outside the grid");
        const auto last_p = static_cast<double>(mdp->n_p() - 1);
        const auto i = static_cast<std::size_t>(std::lround(b.p * last_p));
        const double steps = std::round(b.t / mdp->scenario().grid.dt);
        const auto k = std::min(static_cast<std::size_t>(steps), mdp->n_t() - 1);
        return sol->policy.at(i, k);
    };
}

Policy fixed_action_policy(Decision d) {
    if (!(d.duration > 0.0))
        throw std::invalid_argument("fixed_action_policy: duration must be positive");
    return [d](const Belief&) { return d; };
}

const char* to_string(Observation o) {
    switch (o) {
    case Observation::None:
        return "none";
    case Observation::Free:
        return "free";
    case Observation::Busy:
        return "busy";
    case Observation::Ack:
        return "ack";
    case Observation::Nack:
        return "nack";
    case Observation::Truncated:
        return "truncated";
    }
    return "?";
}

std::uint64_t episode_seed(std::uint64_t root, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

EpisodeTrace run_episode(const Policy& policy, const Scenario& sc, const OccupancyTable& occ,
                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin;
    auto draw = [&](double prob) { return coin(rng, decltype(coin)::param_type(prob)); };

    EpisodeTrace tr;
    tr.primary = sample_process(sc.traffic, rng(), sc.grid.t_horizon, StartState::OnToOffBoundary);
    tr.end_time = tr.primary.times.size() >= 2 ? std::min(tr.primary.times[1], sc.grid.t_horizon)
                                               : sc.grid.t_horizon;

    const auto& cm = sc.costs;
    const double c_collision = collision_cost(cm);
    Belief b{1.0, 0.0};
    while (b.t < tr.end_time) {
        const Decision d = policy(b);
        if (!(d.duration > 0.0))
            throw std::logic_error("policy returned a non-positive duration");
        EpisodeEvent ev{b.t, d.action, d.duration, Observation::None, 0.0, b.p, b.p};
        const double end = b.t + d.duration;

        if (end > tr.end_time) {
            const double span = tr.end_time - b.t;
            ev.duration = span;
            ev.observation = Observation::Truncated;
            switch (d.action) {
            case Action::Idle:
                ev.reward = -cm.k_idle * span;
                break;
            case Action::Sense:
                ev.reward = -cm.k_sense * span;
                break;
            case Action::Transmit: {
                ev.reward = -cm.k_tx * span;
                if (tr.primary.active_during(b.t, tr.end_time)) {
                    ev.reward -= c_collision * span;
                    tr.collision_time += tr.primary.on_time(b.t, tr.end_time);
                }
                break;
            }
            }
            tr.events.push_back(ev);
            b.t = tr.end_time;
            break;
        }

        switch (d.action) {
        case Action::Idle:
            ev.reward = -cm.k_idle * d.duration;
            b = update_idle(b, d.duration, occ);
            break;
        case Action::Sense: {
            const bool idle_throughout = !tr.primary.active_during(b.t, end);
            const bool free = idle_throughout
                                  ? !draw(false_alarm_prob(sc.sensing, d.duration))
                                  : !draw(sc.sensing.detection_prob());
            ev.observation = free ? Observation::Free : Observation::Busy;
            ev.reward = -cm.k_sense * d.duration;
            b = update_sense(b, d.duration, free ? SenseOutcome::Free : SenseOutcome::Busy,
                             sc.sensing, sc.traffic.off_dist);
            break;
        }
        case Action::Transmit: {
            const bool collision = tr.primary.active_during(b.t, end);
            const bool ack = draw(collision ? 1.0 - sc.channel.p_c : 1.0 - sc.channel.p_nc);
            const double payload = std::max(0.0, d.duration - cm.overhead);
            ev.observation = ack ? Observation::Ack : Observation::Nack;
            ev.reward = -cm.k_tx * d.duration;
            if (ack) {
                ev.reward += cm.reward_rate * payload;
                tr.successful_payload += payload;
            }
            if (collision) {
                ev.reward -= c_collision * d.duration;
                tr.collision_time += tr.primary.on_time(b.t, end);
            }
            b = update_tx(b, d.duration, ack ? TxOutcome::Ack : TxOutcome::Nack, sc.channel,
                          sc.traffic.off_dist);
            break;
        }
        }
        ev.p_after = b.p;
        tr.events.push_back(ev);
        b.t = end;
    }
    for (const auto& ev : tr.events)
        tr.total_utility += ev.reward;
    return tr;
}

EvaluationSummary evaluate(const Policy& policy, const Scenario& sc, const OccupancyTable& occ,
                           std::size_t n_episodes, std::uint64_t seed) {
    if (n_episodes < 100)
        throw ConfigError("need at least 100 episodes", "run.episodes");

    struct Stats {
        double utility;
        double collision;
        double payload;
        double length;
        std::array<std::size_t, 3> counts;
    };
    std::vector<Stats> per(n_episodes);
    const auto n = static_cast<std::ptrdiff_t>(n_episodes);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t e = 0; e < n; ++e) {
        const auto tr = run_episode(policy, sc, occ, episode_seed(seed, static_cast<std::uint64_t>(e)));
        Stats s{tr.total_utility, tr.collision_time, tr.successful_payload, tr.end_time, {}};
        for (const auto& ev : tr.events)
            ++s.counts[static_cast<std::size_t>(ev.action)];
        per[static_cast<std::size_t>(e)] = s;
    }

    EvaluationSummary out;
    out.episodes = n_episodes;
    double sum = 0.0, collision = 0.0, payload = 0.0, length = 0.0;
    for (const auto& s : per) {
        sum += s.utility;
        collision += s.collision;
        payload += s.payload;
        length += s.length;
        for (std::size_t a = 0; a < 3; ++a)
            out.action_counts[a] += s.counts[a];
    }
    const auto count = static_cast<double>(n_episodes);
    out.mean_utility = sum / count;
    double ss = 0.0;
    for (const auto& s : per)
        ss += (s.utility - out.mean_utility) * (s.utility - out.mean_utility);
    out.stderr_utility = std::sqrt(ss / (count - 1.0) / count);
    out.ci95 = 1.96 * out.stderr_utility;
    out.mean_length = length / count;
    if (length > 0.0) {
        out.collision_fraction = collision / length;
        out.payload_fraction = payload / length;
    }
    return out;
}

void write_trace_csv(std::ostream& os, const EpisodeTrace& trace) {
    fmt::print(os, "start_t,action,duration,observation,reward,p_before,p_after\n");
    for (const auto& ev : trace.events)
        fmt::print(os, "{:.10g},{},{:.10g},{},{:.10g},{:.10g},{:.10g}\n", ev.start_t,
                   to_string(ev.action), ev.duration, to_string(ev.observation), ev.reward,
                   ev.p_before, ev.p_after);
}

} // namespace adsense
