#include "adsense/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace adsense {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Below this many belief points a parallel region costs more than the column.
constexpr std::ptrdiff_t kParallelMin = 128;

// Continuation read d time units after column k: interpolation between the two
// columns bracketing k + d / dt, clamped to the horizon column.
struct Blend {
    std::span<const double> lo;
    std::span<const double> hi;
    double frac;

    double operator()(double p) const noexcept {
        const double a = interpolate_belief(lo, p);
        if (frac == 0.0)
            return a;
        return (1.0 - frac) * a + frac * interpolate_belief(hi, p);
    }
};

Blend make_blend(const ValueTable& v, std::size_t k, TimeShift s) {
    const std::size_t last = v.n_t() - 1;
    const std::size_t c0 = std::min(k + s.steps, last);
    if (c0 == last)
        return {v.column(last), v.column(last), 0.0};
    return {v.column(c0), v.column(c0 + 1), s.frac};
}

// q_remain(off, t, d) for a fixed t, without the argument checks.
class PersistenceAt {
public:
    PersistenceAt(const HoldDistribution& off, double t)
        : exponential_(off.kind() == HoldDistribution::Kind::Exponential),
          param_(off.parameter()),
          t_(t),
          s_(off.survival(t)) {}

    double operator()(double d) const noexcept {
        if (s_ <= 0.0)
            return 0.0;
        if (exponential_)
            return std::exp(-param_ * d);
        return std::clamp(std::max(0.0, 1.0 - (t_ + d) / param_) / s_, 0.0, 1.0);
    }

private:
    bool exponential_;
    double param_;
    double t_;
    double s_;
};

struct SenseColumn {
    double duration;
    double reward;
    double free_if_idle;
    double free_if_busy;
    double q;
    Blend next;
};

struct TxColumn {
    double duration;
    double reward_at_zero;
    double reward_slope;
    double q;
    Blend next;
};

void write_terminal(const BeliefMdp& mdp, ValueTable& out, PolicyTable* policy, std::size_t k) {
    const auto& term = mdp.terminal();
    std::copy(term.begin(), term.end(), out.column(k).begin());
    if (policy)
        for (std::size_t i = 0; i < mdp.n_p(); ++i)
            policy->at(i, k) = mdp.terminal_decisions()[i];
}

inline void try_sense(ActionValues& av, const SenseColumn& c, double p, double beta) {
    const Branches br = split_belief(p * c.q, c.free_if_idle, c.free_if_busy);
    const double cont = br.w_first * c.next(br.post_first) + br.w_second * c.next(br.post_second);
    const double v = c.reward + beta * cont;
    if (v > av.sense) {
        av.sense = v;
        av.sense_time = c.duration;
    }
}

inline void try_tx(ActionValues& av, const TxColumn& c, double p, double beta,
                   const TxChannelModel& ch) {
    const double x = p * c.q;
    const Branches br = split_belief(x, 1.0 - ch.p_nc, 1.0 - ch.p_c);
    const double cont = br.w_first * c.next(br.post_first) + br.w_second * c.next(br.post_second);
    const double v = c.reward_at_zero + c.reward_slope * x + beta * cont;
    if (v > av.transmit) {
        av.transmit = v;
        av.tx_time = c.duration;
    }
}

} // namespace

void sweep_column(const BeliefMdp& mdp, const ValueTable& future, ValueTable& out,
                  PolicyTable* policy, std::size_t k) {
    const double t = mdp.time_at(k);
    if (k + 1 == mdp.n_t() || mdp.is_terminal_time(t)) {
        write_terminal(mdp, out, policy, k);
        return;
    }

    const auto& sc = mdp.scenario();
    const auto& off = sc.traffic.off_dist;
    const double beta = sc.beta;
    const double p00 = mdp.p00_idle();
    const double p10 = mdp.p10_idle();
    const double idle_r = mdp.idle_reward_value();
    const Blend idle_next = make_blend(future, k, mdp.idle_shift());
    const PersistenceAt q(off, t);

    std::vector<SenseColumn> sense;
    std::vector<TxColumn> tx;
    const bool linear = mdp.is_linear();
    if (!linear) {
        for (const auto& c : mdp.lattice_sense())
            sense.push_back({c.duration, c.reward, c.free_if_idle, c.free_if_busy,
                             q(c.duration), make_blend(future, k, c.shift)});
        for (const auto& c : mdp.lattice_tx())
            tx.push_back({c.duration, c.reward_at_zero, c.reward_slope,
                          q(c.duration), make_blend(future, k, c.shift)});
    }

    const auto n = static_cast<std::ptrdiff_t>(mdp.n_p());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double p = mdp.p_at(i);
        ActionValues av;
        av.idle = idle_r + beta * idle_next(p * p00 + (1.0 - p) * p10);
        av.idle_time = sc.t_idle;
        av.sense = kNegInf;
        av.transmit = kNegInf;
        if (linear) {
            const auto& s = mdp.linear_sense()[i];
            const auto& x = mdp.linear_tx()[i];
            try_sense(av,
                      {s.duration, s.reward, s.free_if_idle, s.free_if_busy,
                       q(s.duration), make_blend(future, k, s.shift)},
                      p, beta);
            try_tx(av,
                   {x.duration, x.reward_at_zero, x.reward_slope, q(x.duration),
                    make_blend(future, k, x.shift)},
                   p, beta, sc.channel);
        } else {
            for (const auto& c : sense)
                try_sense(av, c, p, beta);
            for (const auto& c : tx)
                try_tx(av, c, p, beta, sc.channel);
        }
        out.at(i, k) = av.best_value();
        if (policy)
            policy->at(i, k) = av.best();
    }
}

void sweep_column_reference(const BeliefMdp& mdp, const ValueTable& future, ValueTable& out,
                            PolicyTable* policy, std::size_t k) {
    const double t = mdp.time_at(k);
    if (k + 1 == mdp.n_t() || mdp.is_terminal_time(t)) {
        write_terminal(mdp, out, policy, k);
        return;
    }
    for (std::size_t i = 0; i < mdp.n_p(); ++i) {
        const auto av = mdp.bellman_values(future, mdp.p_at(i), t);
        out.at(i, k) = av.best_value();
        if (policy)
            policy->at(i, k) = av.best();
    }
}

} // namespace adsense
