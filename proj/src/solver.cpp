#include "adsense/solver.hpp"

#include "adsense/errors.hpp"
#include "adsense/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace adsense {

namespace {

constexpr double kSnap = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

} // namespace

const char* to_string(Action a) {
    switch (a) {
    case Action::Idle:
        return "idle";
    case Action::Sense:
        return "sense";
    case Action::Transmit:
        return "transmit";
    }
    return "?";
}

bool LinearDurations::feasible(const DurationBounds& b) const noexcept {
    constexpr double eps = 1e-9;
    return a0 >= 0.0 && a1 >= 0.0 && b0 >= 0.0 && b1 >= 0.0 && a0 >= b.tx_min - eps &&
           a0 + a1 <= b.tx_max + eps && b0 - b1 >= b.sense_min - eps && b0 <= b.sense_max + eps;
}

Decision ActionValues::best() const noexcept {
    if (idle >= sense && idle >= transmit)
        return {Action::Idle, idle_time};
    if (sense >= transmit)
        return {Action::Sense, sense_time};
    return {Action::Transmit, tx_time};
}

double ActionValues::best_value() const noexcept { return std::max({idle, sense, transmit}); }

TimeShift make_shift(double duration, double dt) {
    const double x = duration / dt;
    double whole = std::floor(x);
    double frac = x - whole;
    if (frac < kSnap) {
        frac = 0.0;
    } else if (frac > 1.0 - kSnap) {
        whole += 1.0;
        frac = 0.0;
    }
    return {static_cast<std::size_t>(whole), frac};
}

// ---------------------------------------------------------------------------
// ValueTable

ValueTable::ValueTable(std::size_t n_p, std::size_t n_t, double dt)
    : n_p_(n_p), n_t_(n_t), dt_(dt), values_(n_p * n_t, 0.0) {
    if (n_p < 2 || n_t < 1)
        throw std::invalid_argument("value table needs at least two belief points and one column");
}

void ValueTable::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

double ValueTable::lookup(double p, double t) const {
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12))
        throw std::logic_error("value lookup at belief " + std::to_string(p) + " outside [0, 1]");
    if (!(t >= -1e-12))
        throw std::logic_error("value lookup at negative time " + std::to_string(t));
    p = std::clamp(p, 0.0, 1.0);
    const std::size_t last = n_t_ - 1;
    const TimeShift s = make_shift(std::max(t, 0.0), dt_);
    if (s.steps >= last)
        return interpolate_belief(column(last), p);
    const double lo = interpolate_belief(column(s.steps), p);
    if (s.frac == 0.0)
        return lo;
    return (1.0 - s.frac) * lo + s.frac * interpolate_belief(column(s.steps + 1), p);
}

// ---------------------------------------------------------------------------
// BeliefMdp

std::shared_ptr<const OccupancyTable> scenario_occupancy(const Scenario& sc) {
    const double horizon = std::max(sc.grid.t_horizon, sc.t_idle);
    return std::make_shared<const OccupancyTable>(solve_occupancy(sc.traffic, sc.grid.dt, horizon));
}

BeliefMdp::BeliefMdp(Scenario sc, DurationPolicy durations,
                     std::shared_ptr<const OccupancyTable> occupancy)
    : sc_(std::move(sc)), durations_(std::move(durations)), occ_(std::move(occupancy)) {
    sc_.validate();
    n_t_ = sc_.grid.n_t();
    if (!occ_)
        occ_ = scenario_occupancy(sc_);
    if (std::abs(occ_->dt() - sc_.grid.dt) > 1e-12 || occ_->horizon() < sc_.t_idle)
        throw ConfigError("occupancy table does not match the scenario grid", "grid.dt");

    idle_reward_ = idle_reward(sc_.costs, sc_.t_idle);
    idle_shift_ = make_shift(sc_.t_idle, sc_.grid.dt);
    p00_idle_ = occ_->p00_at(sc_.t_idle);
    p10_idle_ = occ_->p10_at(sc_.t_idle);

    const auto& b = sc_.bounds;
    if (const auto* fixed = std::get_if<FixedDurations>(&durations_)) {
        if (fixed->sense < b.sense_min - kSnap || fixed->sense > b.sense_max + kSnap)
            throw ConfigError("fixed sensing time outside [sense_min, sense_max]", "run.t_sense");
        if (fixed->tx < b.tx_min - kSnap || fixed->tx > b.tx_max + kSnap)
            throw ConfigError("fixed transmission time outside [tx_min, tx_max]", "run.t_tx");
        sense_lattice_.push_back(make_sense(fixed->sense));
        tx_lattice_.push_back(make_tx(fixed->tx));
    } else if (std::holds_alternative<PerStateDurations>(durations_)) {
        for (double d : sense_candidates(0.0))
            sense_lattice_.push_back(make_sense(d));
        for (double d : tx_candidates(0.0))
            tx_lattice_.push_back(make_tx(d));
    } else {
        const auto& lin = std::get<LinearDurations>(durations_);
        if (!lin.feasible(b))
            throw ConfigError("linear duration coefficients violate the duration bounds",
                              "run.linear");
        sense_linear_.reserve(n_p());
        tx_linear_.reserve(n_p());
        for (std::size_t i = 0; i < n_p(); ++i) {
            sense_linear_.push_back(make_sense(lin.sense(p_at(i))));
            tx_linear_.push_back(make_tx(lin.tx(p_at(i))));
        }
    }

    terminal_.resize(n_p());
    terminal_decisions_.resize(n_p());
    for (std::size_t i = 0; i < n_p(); ++i) {
        const auto av = terminal_action_values(p_at(i));
        terminal_[i] = av.best_value();
        terminal_decisions_[i] = av.best();
    }
}

BeliefMdp::SenseCandidate BeliefMdp::make_sense(double d) const {
    return {d, sense_reward(sc_.costs, d), 1.0 - false_alarm_prob(sc_.sensing, d),
            1.0 - sc_.sensing.detection_prob(), make_shift(d, sc_.grid.dt)};
}

BeliefMdp::TxCandidate BeliefMdp::make_tx(double d) const {
    const double at_zero = tx_expected_reward(sc_.costs, sc_.channel, 0.0, d);
    const double at_one = tx_expected_reward(sc_.costs, sc_.channel, 1.0, d);
    return {d, at_zero, at_one - at_zero, make_shift(d, sc_.grid.dt)};
}

bool BeliefMdp::is_terminal_time(double t) const {
    return t >= sc_.grid.t_horizon - kSnap || sc_.traffic.off_dist.survival(t) <= 0.0;
}

namespace {

std::vector<double> lattice(double lo, double hi, double step) {
    std::vector<double> out;
    for (std::size_t j = 0;; ++j) {
        const double d = lo + static_cast<double>(j) * step;
        if (d > hi + kSnap)
            break;
        out.push_back(d);
    }
    if (out.back() < hi - kSnap)
        out.push_back(hi);
    return out;
}

} // namespace

std::vector<double> BeliefMdp::sense_candidates(double p) const {
    return std::visit(
        [&](const auto& d) -> std::vector<double> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, FixedDurations>)
                return {d.sense};
            else if constexpr (std::is_same_v<T, PerStateDurations>)
                return lattice(sc_.bounds.sense_min, sc_.bounds.sense_max, sc_.grid.duration_step);
            else
                return {d.sense(p)};
        },
        durations_);
}

std::vector<double> BeliefMdp::tx_candidates(double p) const {
    return std::visit(
        [&](const auto& d) -> std::vector<double> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, FixedDurations>)
                return {d.tx};
            else if constexpr (std::is_same_v<T, PerStateDurations>)
                return lattice(sc_.bounds.tx_min, sc_.bounds.tx_max, sc_.grid.duration_step);
            else
                return {d.tx(p)};
        },
        durations_);
}

ActionValues BeliefMdp::terminal_action_values(double p) const {
    ActionValues av;
    av.idle = idle_reward_;
    av.idle_time = sc_.t_idle;
    av.sense = kNegInf;
    for (double d : sense_candidates(p)) {
        const double v = sense_reward(sc_.costs, d);
        if (v > av.sense) {
            av.sense = v;
            av.sense_time = d;
        }
    }
    av.transmit = kNegInf;
    for (double d : tx_candidates(p)) {
        const double v = tx_expected_reward(sc_.costs, sc_.channel, 0.0, d);
        if (v > av.transmit) {
            av.transmit = v;
            av.tx_time = d;
        }
    }
    return av;
}

std::vector<double> BeliefMdp::terminal_values() const { return terminal_; }

ActionValues BeliefMdp::bellman_values(const ValueTable& future, double p, double t) const {
    if (is_terminal_time(t))
        return terminal_action_values(p);

    const auto& off = sc_.traffic.off_dist;
    const double beta = sc_.beta;
    const Belief b{p, t};
    ActionValues av;

    // Past the occupancy horizon the continuation is terminal anyway; only the
    // belief coordinate is needed for the lookup.
    const Belief after_idle = t + sc_.t_idle <= occ_->horizon()
                                  ? update_idle(b, sc_.t_idle, *occ_)
                                  : Belief{p * p00_idle_ + (1.0 - p) * p10_idle_, t + sc_.t_idle};
    av.idle = idle_reward(sc_.costs, sc_.t_idle) + beta * future.lookup(after_idle.p, after_idle.t);
    av.idle_time = sc_.t_idle;

    av.sense = kNegInf;
    for (double d : sense_candidates(p)) {
        const auto w = sense_outcome_probs(b, d, sc_.sensing, off);
        double cont = 0.0;
        if (w.first > 0.0)
            cont += w.first *
                    future.lookup(update_sense(b, d, SenseOutcome::Free, sc_.sensing, off).p, t + d);
        if (w.second > 0.0)
            cont += w.second *
                    future.lookup(update_sense(b, d, SenseOutcome::Busy, sc_.sensing, off).p, t + d);
        const double v = sense_reward(sc_.costs, d) + beta * cont;
        if (v > av.sense) {
            av.sense = v;
            av.sense_time = d;
        }
    }

    av.transmit = kNegInf;
    for (double d : tx_candidates(p)) {
        const double q = q_remain(off, t, d).prob;
        const auto w = tx_outcome_probs(b, d, sc_.channel, off);
        double cont = 0.0;
        if (w.first > 0.0)
            cont += w.first *
                    future.lookup(update_tx(b, d, TxOutcome::Ack, sc_.channel, off).p, t + d);
        if (w.second > 0.0)
            cont += w.second *
                    future.lookup(update_tx(b, d, TxOutcome::Nack, sc_.channel, off).p, t + d);
        const double v = tx_expected_reward(sc_.costs, sc_.channel, p * q, d) + beta * cont;
        if (v > av.transmit) {
            av.transmit = v;
            av.tx_time = d;
        }
    }
    return av;
}

// ---------------------------------------------------------------------------
// Solvers

Solution backward_induction(const BeliefMdp& mdp) {
    const auto& sc = mdp.scenario();
    if (sc.beta == 1.0 && !std::isfinite(sc.traffic.off_dist.support_end()))
        throw ConfigError("backward induction with beta = 1 needs persistence to vanish by the "
                          "horizon; use value_iteration with beta < 1",
                          "run.beta");
    Solution sol{mdp.make_value_table(), mdp.make_policy_table()};
    for (std::size_t k = mdp.n_t(); k-- > 0;)
        sweep_column(mdp, sol.values, sol.values, &sol.policy, k);
    return sol;
}

Solution backward_induction(const Scenario& sc, const DurationPolicy& durations) {
    return backward_induction(BeliefMdp(sc, durations));
}

void backward_induction_values(const BeliefMdp& mdp, ValueTable& values) {
    if (values.n_p() != mdp.n_p() || values.n_t() != mdp.n_t())
        values = mdp.make_value_table();
    for (std::size_t k = mdp.n_t(); k-- > 0;)
        sweep_column(mdp, values, values, nullptr, k);
}

ValueIterationResult value_iteration(const BeliefMdp& mdp, double tol,
                                     std::size_t max_iterations) {
    if (!(mdp.scenario().beta < 1.0))
        throw ConfigError("value iteration needs beta < 1", "run.beta");
    if (!(tol > 0.0))
        throw ConfigError("tolerance must be positive", "run.tol");

    ValueIterationResult res;
    ValueTable current = mdp.make_value_table();
    ValueTable next = mdp.make_value_table();
    PolicyTable policy = mdp.make_policy_table();
    for (std::size_t it = 0; it < max_iterations; ++it) {
        for (std::size_t k = 0; k < mdp.n_t(); ++k)
            sweep_column(mdp, current, next, &policy, k);
        double change = 0.0;
        for (std::size_t k = 0; k < mdp.n_t(); ++k) {
            const auto a = current.column(k);
            const auto b = next.column(k);
            for (std::size_t i = 0; i < a.size(); ++i)
                change = std::max(change, std::abs(a[i] - b[i]));
        }
        std::swap(current, next);
        res.residuals.push_back(change);
        res.iterations = it + 1;
        res.residual = change;
        if (change < tol)
            break;
    }
    res.solution = Solution{std::move(current), std::move(policy)};
    return res;
}

ValueIterationResult value_iteration(const Scenario& sc, const DurationPolicy& durations,
                                     double tol) {
    return value_iteration(BeliefMdp(sc, durations), tol);
}

ValueTable evaluate_fixed_decision(const BeliefMdp& mdp, Decision decision, bool terminal_reward) {
    const auto& sc = mdp.scenario();
    const auto& off = sc.traffic.off_dist;
    const double d = decision.duration;
    if (!(d > 0.0))
        throw std::invalid_argument("evaluate_fixed_decision: duration must be positive");

    double horizon_value = 0.0;
    if (terminal_reward) {
        switch (decision.action) {
        case Action::Idle:
            horizon_value = idle_reward(sc.costs, d);
            break;
        case Action::Sense:
            horizon_value = sense_reward(sc.costs, d);
            break;
        case Action::Transmit:
            horizon_value = tx_expected_reward(sc.costs, sc.channel, 0.0, d);
            break;
        }
    }

    ValueTable v = mdp.make_value_table();
    for (std::size_t k = mdp.n_t(); k-- > 0;) {
        const double t = mdp.time_at(k);
        if (k + 1 == mdp.n_t() || mdp.is_terminal_time(t)) {
            std::fill(v.column(k).begin(), v.column(k).end(), horizon_value);
            continue;
        }
        for (std::size_t i = 0; i < mdp.n_p(); ++i) {
            const Belief b{mdp.p_at(i), t};
            double value = 0.0;
            switch (decision.action) {
            case Action::Idle: {
                const double lag_p = b.p * mdp.p00_idle() + (1.0 - b.p) * mdp.p10_idle();
                value = idle_reward(sc.costs, d) + sc.beta * v.lookup(lag_p, t + d);
                break;
            }
            case Action::Sense: {
                const auto w = sense_outcome_probs(b, d, sc.sensing, off);
                double cont = 0.0;
                if (w.first > 0.0)
                    cont += w.first *
                            v.lookup(update_sense(b, d, SenseOutcome::Free, sc.sensing, off).p, t + d);
                if (w.second > 0.0)
                    cont += w.second *
                            v.lookup(update_sense(b, d, SenseOutcome::Busy, sc.sensing, off).p, t + d);
                value = sense_reward(sc.costs, d) + sc.beta * cont;
                break;
            }
            case Action::Transmit: {
                const double q = q_remain(off, t, d).prob;
                const auto w = tx_outcome_probs(b, d, sc.channel, off);
                double cont = 0.0;
                if (w.first > 0.0)
                    cont += w.first * v.lookup(update_tx(b, d, TxOutcome::Ack, sc.channel, off).p, t + d);
                if (w.second > 0.0)
                    cont += w.second * v.lookup(update_tx(b, d, TxOutcome::Nack, sc.channel, off).p, t + d);
                value = tx_expected_reward(sc.costs, sc.channel, b.p * q, d) + sc.beta * cont;
                break;
            }
            }
            v.at(i, k) = value;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Thresholds

std::optional<std::size_t> find_structure_violation(const PolicyTable& policy) {
    for (std::size_t k = 0; k < policy.n_t(); ++k) {
        auto prev = Action::Idle;
        for (std::size_t i = 0; i < policy.n_p(); ++i) {
            const Action a = policy.at(i, k).action;
            if (static_cast<int>(a) < static_cast<int>(prev))
                return k;
            prev = a;
        }
    }
    return std::nullopt;
}

void check_threshold_structure(const PolicyTable& policy) {
    if (const auto k = find_structure_violation(policy))
        throw StructuralViolation("policy column " + std::to_string(*k) +
                                      " is not ordered Idle, Sense, Transmit along the belief axis",
                                  *k);
}

namespace {

// Largest p in [lo, hi] (to within `precision`) still satisfying `inside`,
// given inside(lo) and !inside(hi).
template <class Pred>
double bisect_boundary(double lo, double hi, double precision, Pred inside) {
    while (hi - lo > precision) {
        const double mid = 0.5 * (lo + hi);
        if (inside(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

Thresholds extract_thresholds(const BeliefMdp& mdp, const Solution& sol, std::size_t column,
                              double precision) {
    const auto& pol = sol.policy;
    const std::size_t n = pol.n_p();
    auto prev = Action::Idle;
    std::optional<std::size_t> last_idle, first_tx;
    bool any_sense = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Action a = pol.at(i, column).action;
        if (static_cast<int>(a) < static_cast<int>(prev))
            throw StructuralViolation("policy column " + std::to_string(column) +
                                          " is not ordered Idle, Sense, Transmit",
                                      column);
        prev = a;
        if (a == Action::Idle)
            last_idle = i;
        if (a == Action::Sense)
            any_sense = true;
        if (a == Action::Transmit && !first_tx)
            first_tx = i;
    }

    const double t = mdp.time_at(column);
    auto action_at = [&](double p) { return mdp.bellman_values(sol.values, p, t).best().action; };

    Thresholds out;
    if (last_idle) {
        if (*last_idle + 1 == n)
            out.p1 = 1.0;
        else
            out.p1 = bisect_boundary(mdp.p_at(*last_idle), mdp.p_at(*last_idle + 1), precision,
                                     [&](double p) { return action_at(p) == Action::Idle; });
    }
    if (first_tx) {
        if (*first_tx == 0)
            out.p2 = 0.0;
        else if (!any_sense && out.p1)
            out.p2 = out.p1;
        else
            out.p2 = bisect_boundary(mdp.p_at(*first_tx - 1), mdp.p_at(*first_tx), precision,
                                     [&](double p) { return action_at(p) != Action::Transmit; });
    }
    return out;
}

} // namespace adsense
