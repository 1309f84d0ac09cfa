#pragma once

// Primary-user traffic: alternating on/off renewal process with independent
// hold times, its occupancy probabilities, and a sampler for the simulator.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace adsense {

/// Hold-time distribution of one primary state.
class HoldDistribution {
public:
    enum class Kind { Uniform, Exponential };

    /// Uniform on [0, b].
    static HoldDistribution uniform(double b);
    /// Exponential with the given rate (1 / mean).
    static HoldDistribution exponential(double rate);

    Kind kind() const noexcept { return kind_; }
    /// Uniform support endpoint b, or the exponential rate.
    double parameter() const noexcept { return param_; }
    double mean() const noexcept;

    /// Density with the left-limit convention at the uniform endpoint, f(b) = 1/b.
    double density(double t) const;
    /// 1 - F(t). Throws DomainError for t < 0.
    double survival(double t) const;
    /// Survival of the equilibrium residual life: integral_t^inf survival(u) du / mean.
    double residual_survival(double t) const;
    /// First t with survival(t) == 0, or +inf.
    double support_end() const noexcept;

    template <class Rng>
    double sample(Rng& rng) const;

private:
    HoldDistribution(Kind kind, double param) : kind_(kind), param_(param) {}

    Kind kind_;
    double param_;
};

struct TrafficModel {
    HoldDistribution off_dist;
    HoldDistribution on_dist;

    /// Long-run fraction of time the primary is idle, T_off / (T_on + T_off).
    double idle_availability() const;
};

/// 1 - F(t) for `dist`.
double survival(const HoldDistribution& dist, double t);

struct Persistence {
    double prob = 0.0;
    /// True when survival(t) == 0: the primary has certainly returned.
    bool past_support = false;
};

/// Probability an idle period that has lasted `t` lasts at least `duration` more:
/// (1 - F(t + duration)) / (1 - F(t)).
Persistence q_remain(const HoldDistribution& dist, double t, double duration);

/// P00 / P10 on a uniform lag grid 0, dt, 2dt, ...
class OccupancyTable {
public:
    OccupancyTable(double dt, std::vector<double> p00, std::vector<double> p10);

    double dt() const noexcept { return dt_; }
    double horizon() const noexcept { return dt_ * static_cast<double>(p00_.size() - 1); }
    const std::vector<double>& p00() const noexcept { return p00_; }
    const std::vector<double>& p10() const noexcept { return p10_; }

    /// Linear interpolation in the lag. Throws HorizonError beyond horizon().
    double p00_at(double lag) const;
    double p10_at(double lag) const;

private:
    double interpolate(const std::vector<double>& v, double lag) const;

    double dt_;
    std::vector<double> p00_;
    std::vector<double> p10_;
};

/// Occupancy probabilities by forward trapezoidal recursion of the coupled
/// renewal (Volterra) equations. Requires dt <= min(mean_on, mean_off) / 50.
OccupancyTable solve_occupancy(const TrafficModel& model, double dt, double horizon);

struct UniformClosedForm {
    double p00;
    double p10;
};

/// The printed closed forms for uniform [0, b] on and off holds, valid for 0 < t < b.
/// Kept for comparison only; they disagree with solve_occupancy and with Monte Carlo.
UniformClosedForm closed_form_uniform_occupancy(double b, double t);

/// Primary state changes over [0, horizon).
struct ToggleList {
    bool initially_on = false;
    std::vector<double> times;

    bool on_at(double t) const;
    /// True if the primary is on at any instant of [t0, t1).
    bool active_during(double t0, double t1) const;
    /// Total on-time within [t0, t1).
    double on_time(double t0, double t1) const;
};

enum class StartState { OnToOffBoundary, Equilibrium };

ToggleList sample_process(const TrafficModel& model, std::uint64_t seed, double horizon,
                          StartState start);

struct OccupancyEstimate {
    double p00 = 1.0;
    double p10 = 0.0;
    double stderr_p00 = 0.0;
    double stderr_p10 = 0.0;
    std::size_t n_idle = 0;
    std::size_t n_busy = 0;
};

/// Monte Carlo occupancy estimate from independent equilibrium samples.
/// Requires n_trials >= 10^4.
OccupancyEstimate mc_occupancy(const TrafficModel& model, double t, std::size_t n_trials,
                               std::uint64_t seed);

// ---------------------------------------------------------------------------

template <class Rng>
double HoldDistribution::sample(Rng& rng) const {
    // Inverse CDF from a single uniform draw keeps the stream layout fixed.
    const double u = std::generate_canonical<double, 53>(rng);
    if (kind_ == Kind::Uniform)
        return u * param_;
    return -std::log1p(-u) / param_;
}

} // namespace adsense
