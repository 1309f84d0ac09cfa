#pragma once

// Belief-state dynamic programme over the (p, t) grid: action values, backward
// induction, value iteration and threshold extraction.

#include "adsense/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace adsense {

enum class Action : std::uint8_t { Idle = 0, Sense = 1, Transmit = 2 };

const char* to_string(Action a);

struct Decision {
    Action action = Action::Idle;
    double duration = 0.0;

    friend bool operator==(const Decision&, const Decision&) = default;
};

/// One sensing and one transmission duration everywhere (traditional scheme).
struct FixedDurations {
    double sense;
    double tx;
};

/// Best sensing and transmission duration chosen independently at each state
/// from the lattice {min, min + step, ..., max}.
struct PerStateDurations {};

/// T_T(p) = a0 + a1 p, T_S(p) = b0 - b1 p.
struct LinearDurations {
    double a0 = 1.0;
    double a1 = 0.0;
    double b0 = 1.0;
    double b1 = 0.0;

    double tx(double p) const noexcept { return a0 + a1 * p; }
    double sense(double p) const noexcept { return b0 - b1 * p; }

    /// Non-negative coefficients with a0 >= tx_min, a0 + a1 <= tx_max,
    /// b0 - b1 >= sense_min and b0 <= sense_max.
    bool feasible(const DurationBounds& b) const noexcept;

    friend bool operator==(const LinearDurations&, const LinearDurations&) = default;
};

using DurationPolicy = std::variant<FixedDurations, PerStateDurations, LinearDurations>;

/// Linear interpolation of a column sampled on the uniform belief grid.
inline double interpolate_belief(std::span<const double> column, double p) noexcept {
    const std::size_t last = column.size() - 1;
    const double pos = p * static_cast<double>(last);
    std::size_t lo = pos <= 0.0 ? 0 : static_cast<std::size_t>(pos);
    if (lo >= last)
        lo = last - 1;
    const double f = pos - static_cast<double>(lo);
    return (1.0 - f) * column[lo] + f * column[lo + 1];
}

/// U_s on the grid, column-major in time. Column n_t - 1 sits at the horizon and
/// holds the terminal values; lookups past it return the terminal values too.
class ValueTable {
public:
    ValueTable() = default;
    ValueTable(std::size_t n_p, std::size_t n_t, double dt);

    std::size_t n_p() const noexcept { return n_p_; }
    std::size_t n_t() const noexcept { return n_t_; }
    double dt() const noexcept { return dt_; }
    double horizon() const noexcept { return dt_ * static_cast<double>(n_t_ - 1); }

    double& at(std::size_t i, std::size_t k) noexcept { return values_[k * n_p_ + i]; }
    double at(std::size_t i, std::size_t k) const noexcept { return values_[k * n_p_ + i]; }
    std::span<double> column(std::size_t k) noexcept { return {values_.data() + k * n_p_, n_p_}; }
    std::span<const double> column(std::size_t k) const noexcept {
        return {values_.data() + k * n_p_, n_p_};
    }

    /// Bilinear interpolation. Throws std::logic_error for p outside [0, 1] or t < 0.
    double lookup(double p, double t) const;

    void fill(double v);

private:
    std::size_t n_p_ = 0;
    std::size_t n_t_ = 0;
    double dt_ = 1.0;
    std::vector<double> values_;
};

class PolicyTable {
public:
    PolicyTable() = default;
    PolicyTable(std::size_t n_p, std::size_t n_t) : n_p_(n_p), n_t_(n_t), decisions_(n_p * n_t) {}

    std::size_t n_p() const noexcept { return n_p_; }
    std::size_t n_t() const noexcept { return n_t_; }
    Decision& at(std::size_t i, std::size_t k) noexcept { return decisions_[k * n_p_ + i]; }
    const Decision& at(std::size_t i, std::size_t k) const noexcept {
        return decisions_[k * n_p_ + i];
    }

private:
    std::size_t n_p_ = 0;
    std::size_t n_t_ = 0;
    std::vector<Decision> decisions_;
};

/// Values of the three actions at one state, with the best duration of each.
struct ActionValues {
    double idle = 0.0;
    double sense = 0.0;
    double transmit = 0.0;
    double idle_time = 0.0;
    double sense_time = 0.0;
    double tx_time = 0.0;

    /// Ties go to Idle, then Sense.
    Decision best() const noexcept;
    double best_value() const noexcept;
};

/// Split of a duration into whole grid steps plus a fractional remainder.
struct TimeShift {
    std::size_t steps = 0;
    double frac = 0.0;
};

TimeShift make_shift(double duration, double dt);

/// The discretised belief MDP for one scenario and duration policy. Holds
/// everything that does not depend on the value function, so one instance can be
/// swept repeatedly (backward induction, value iteration, threshold refinement).
class BeliefMdp {
public:
    BeliefMdp(Scenario sc, DurationPolicy durations,
              std::shared_ptr<const OccupancyTable> occupancy = nullptr);

    const Scenario& scenario() const noexcept { return sc_; }
    const DurationPolicy& durations() const noexcept { return durations_; }
    const OccupancyTable& occupancy() const noexcept { return *occ_; }
    std::shared_ptr<const OccupancyTable> shared_occupancy() const noexcept { return occ_; }

    std::size_t n_p() const noexcept { return sc_.grid.n_p; }
    std::size_t n_t() const noexcept { return n_t_; }
    double p_at(std::size_t i) const noexcept { return sc_.grid.p_at(i); }
    double time_at(std::size_t k) const noexcept { return static_cast<double>(k) * sc_.grid.dt; }

    /// Time at which the terminal regime applies: past the horizon, or once the
    /// idle hold has certainly ended.
    bool is_terminal_time(double t) const;

    /// Sensing and transmission durations available at belief p.
    std::vector<double> sense_candidates(double p) const;
    std::vector<double> tx_candidates(double p) const;

    /// Immediate rewards only, with p * q = 0.
    ActionValues terminal_action_values(double p) const;
    std::vector<double> terminal_values() const;

    /// I, S*, T* at (p, t) with continuation values read from `future`.
    /// Composes the belief and reward modules directly; the sweep kernels use
    /// precomputed equivalents.
    ActionValues bellman_values(const ValueTable& future, double p, double t) const;

    ValueTable make_value_table() const { return {n_p(), n_t_, sc_.grid.dt}; }
    PolicyTable make_policy_table() const { return {n_p(), n_t_}; }

    // Precomputed pieces shared by the sweep kernels.
    struct SenseCandidate {
        double duration;
        double reward;
        double free_if_idle;   // 1 - P_fa
        double free_if_busy;   // 1 - P_d
        TimeShift shift;
    };
    struct TxCandidate {
        double duration;
        double reward_at_zero;   // expected reward when p q = 0
        double reward_slope;     // d reward / d(p q)
        TimeShift shift;
    };
    const std::vector<SenseCandidate>& lattice_sense() const noexcept { return sense_lattice_; }
    const std::vector<TxCandidate>& lattice_tx() const noexcept { return tx_lattice_; }
    /// Linear policy only: the single candidate at each grid belief.
    const std::vector<SenseCandidate>& linear_sense() const noexcept { return sense_linear_; }
    const std::vector<TxCandidate>& linear_tx() const noexcept { return tx_linear_; }
    bool is_linear() const noexcept { return std::holds_alternative<LinearDurations>(durations_); }

    double idle_reward_value() const noexcept { return idle_reward_; }
    TimeShift idle_shift() const noexcept { return idle_shift_; }
    double p00_idle() const noexcept { return p00_idle_; }
    double p10_idle() const noexcept { return p10_idle_; }
    const std::vector<double>& terminal() const noexcept { return terminal_; }
    const std::vector<Decision>& terminal_decisions() const noexcept { return terminal_decisions_; }

private:
    SenseCandidate make_sense(double d) const;
    TxCandidate make_tx(double d) const;

    Scenario sc_;
    DurationPolicy durations_;
    std::shared_ptr<const OccupancyTable> occ_;
    std::size_t n_t_;

    double idle_reward_ = 0.0;
    TimeShift idle_shift_;
    double p00_idle_ = 1.0;
    double p10_idle_ = 0.0;

    std::vector<SenseCandidate> sense_lattice_;
    std::vector<TxCandidate> tx_lattice_;
    std::vector<SenseCandidate> sense_linear_;
    std::vector<TxCandidate> tx_linear_;

    std::vector<double> terminal_;
    std::vector<Decision> terminal_decisions_;
};

/// Occupancy table covering the scenario's horizon on its time grid.
std::shared_ptr<const OccupancyTable> scenario_occupancy(const Scenario& sc);

struct Solution {
    ValueTable values;
    PolicyTable policy;
};

/// Fills the table from the horizon back to t = 0. Throws ConfigError for
/// beta = 1 with an idle hold whose persistence never vanishes.
Solution backward_induction(const BeliefMdp& mdp);
Solution backward_induction(const Scenario& sc, const DurationPolicy& durations);

/// Same sweep without recording decisions, reusing `values` storage.
void backward_induction_values(const BeliefMdp& mdp, ValueTable& values);

struct ValueIterationResult {
    Solution solution;
    std::size_t iterations = 0;
    double residual = 0.0;
    std::vector<double> residuals;   ///< sup-norm change of every sweep
};

/// Jacobi iteration of the Bellman operator from a zero table until the
/// sup-norm change drops below `tol`. Requires beta < 1.
ValueIterationResult value_iteration(const BeliefMdp& mdp, double tol,
                                     std::size_t max_iterations = 1000000);
ValueIterationResult value_iteration(const Scenario& sc, const DurationPolicy& durations,
                                     double tol);

/// Expected utility of always taking `decision` (one action, one duration).
/// With `terminal_reward` the horizon value is that action's immediate reward at
/// p q = 0; otherwise nothing is earned past the horizon.
ValueTable evaluate_fixed_decision(const BeliefMdp& mdp, Decision decision, bool terminal_reward);

struct Thresholds {
    std::optional<double> p1;   ///< upper end of the Idle region
    std::optional<double> p2;   ///< lower end of the Transmit region
};

/// Index of the first column whose actions are not Idle* Sense* Transmit* along p.
std::optional<std::size_t> find_structure_violation(const PolicyTable& policy);

/// Throws StructuralViolation for the first offending column.
void check_threshold_structure(const PolicyTable& policy);

/// Action boundaries at grid column k, refined between grid points by bisection
/// on bellman_values to a bracket narrower than `precision`.
Thresholds extract_thresholds(const BeliefMdp& mdp, const Solution& sol, std::size_t column,
                              double precision = 1e-4);

} // namespace adsense
