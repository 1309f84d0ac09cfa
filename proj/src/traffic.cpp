#include "adsense/traffic.hpp"

#include "adsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace adsense {

HoldDistribution HoldDistribution::uniform(double b) {
    if (!(b > 0.0) || !std::isfinite(b))
        throw ConfigError("uniform hold support must be positive, got " + std::to_string(b));
    return {Kind::Uniform, b};
}

HoldDistribution HoldDistribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw ConfigError("exponential hold rate must be positive, got " + std::to_string(rate));
    return {Kind::Exponential, rate};
}

double HoldDistribution::mean() const noexcept {
    return kind_ == Kind::Uniform ? param_ / 2.0 : 1.0 / param_;
}

double HoldDistribution::density(double t) const {
    if (t < 0.0)
        return 0.0;
    if (kind_ == Kind::Uniform)
        return t <= param_ ? 1.0 / param_ : 0.0;
    return param_ * std::exp(-param_ * t);
}

double HoldDistribution::survival(double t) const {
    if (t < 0.0 || std::isnan(t))
        throw DomainError("survival: negative time " + std::to_string(t));
    if (kind_ == Kind::Uniform)
        return std::max(0.0, 1.0 - t / param_);
    return std::exp(-param_ * t);
}

double HoldDistribution::residual_survival(double t) const {
    if (t < 0.0)
        throw DomainError("residual_survival: negative time " + std::to_string(t));
    if (kind_ == Kind::Uniform) {
        const double s = std::max(0.0, 1.0 - t / param_);
        return s * s;
    }
    return std::exp(-param_ * t);
}

double HoldDistribution::support_end() const noexcept {
    return kind_ == Kind::Uniform ? param_ : std::numeric_limits<double>::infinity();
}

double TrafficModel::idle_availability() const {
    return off_dist.mean() / (off_dist.mean() + on_dist.mean());
}

double survival(const HoldDistribution& dist, double t) { return dist.survival(t); }

Persistence q_remain(const HoldDistribution& dist, double t, double duration) {
    if (duration < 0.0)
        throw DomainError("q_remain: negative duration " + std::to_string(duration));
    const double s = dist.survival(t);
    if (s <= 0.0)
        return {0.0, true};
    if (dist.kind() == HoldDistribution::Kind::Exponential)
        return {std::exp(-dist.parameter() * duration), false};
    return {std::clamp(dist.survival(t + duration) / s, 0.0, 1.0), false};
}

// ---------------------------------------------------------------------------
// OccupancyTable

OccupancyTable::OccupancyTable(double dt, std::vector<double> p00, std::vector<double> p10)
    : dt_(dt), p00_(std::move(p00)), p10_(std::move(p10)) {
    if (!(dt_ > 0.0) || p00_.empty() || p00_.size() != p10_.size())
        throw ConfigError("occupancy table needs dt > 0 and matching non-empty columns");
}

double OccupancyTable::interpolate(const std::vector<double>& v, double lag) const {
    if (lag < 0.0)
        throw DomainError("occupancy lookup at negative lag " + std::to_string(lag));
    const double pos = lag / dt_;
    const double last = static_cast<double>(v.size() - 1);
    if (pos > last + 1e-9)
        throw HorizonError("occupancy lookup at lag " + std::to_string(lag) +
                           " beyond table horizon " + std::to_string(horizon()));
    if (pos >= last)
        return v.back();
    const auto lo = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(lo);
    return (1.0 - f) * v[lo] + f * v[lo + 1];
}

double OccupancyTable::p00_at(double lag) const { return interpolate(p00_, lag); }
double OccupancyTable::p10_at(double lag) const { return interpolate(p10_, lag); }

// ---------------------------------------------------------------------------
// Renewal recursion

namespace {

// dt * [ f0 g_n / 2 + sum_{k=1}^{n-1} f_k g_{n-k} + f_n g_0 / 2 ] without the f0 g_n term.
double trapezoid_tail(const std::vector<double>& f, const std::vector<double>& g, std::size_t n,
                      double dt) {
    double acc = 0.5 * f[n] * g[0];
    for (std::size_t k = 1; k < n; ++k)
        acc += f[k] * g[n - k];
    return dt * acc;
}

} // namespace

OccupancyTable solve_occupancy(const TrafficModel& model, double dt, double horizon) {
    if (!(dt > 0.0))
        throw ConfigError("occupancy step must be positive", "grid.dt");
    if (!(horizon >= dt))
        throw ConfigError("occupancy horizon must be at least one step", "grid.t_horizon");
    const double finest_mean = std::min(model.on_dist.mean(), model.off_dist.mean());
    if (dt > finest_mean / 50.0 * (1.0 + 1e-12))
        throw ConfigError("step " + std::to_string(dt) + " too coarse for hold mean " +
                              std::to_string(finest_mean) + " (need dt <= mean/50)",
                          "grid.dt");

    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    const std::size_t n = n_steps + 1;
    const double t_on = model.on_dist.mean();
    const double t_off = model.off_dist.mean();

    std::vector<double> f_on(n), f_off(n), s_on(n), e_on(n), e_off(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = static_cast<double>(i) * dt;
        f_on[i] = model.on_dist.density(tau);
        f_off[i] = model.off_dist.density(tau);
        s_on[i] = model.on_dist.survival(tau);
        e_on[i] = s_on[i] / t_on;
        e_off[i] = model.off_dist.survival(tau) / t_off;
    }

    // on_fresh[i]:  P(on at i*dt | on period starts at 0)
    // off_fresh[i]: P(on at i*dt | off period starts at 0)
    std::vector<double> on_fresh(n, 0.0), off_fresh(n, 0.0);
    on_fresh[0] = 1.0;
    const double c_off = 0.5 * dt * f_off[0];
    const double c_on = 0.5 * dt * f_on[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double known_off = trapezoid_tail(f_off, on_fresh, i, dt);
        const double known_on = s_on[i] + trapezoid_tail(f_on, off_fresh, i, dt);
        on_fresh[i] = (known_on + c_on * known_off) / (1.0 - c_on * c_off);
        off_fresh[i] = known_off + c_off * on_fresh[i];
    }

    std::vector<double> off_after_on(n);
    for (std::size_t i = 0; i < n; ++i)
        off_after_on[i] = 1.0 - on_fresh[i];

    std::vector<double> p00(n), p10(n);
    p00[0] = 1.0;
    p10[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double tau = static_cast<double>(i) * dt;
        const double p11 = model.on_dist.residual_survival(tau) +
                           trapezoid_tail(e_on, off_fresh, i, dt) + 0.5 * dt * e_on[0] * off_fresh[i];
        const double stay_idle = model.off_dist.residual_survival(tau) +
                                 trapezoid_tail(e_off, off_after_on, i, dt) +
                                 0.5 * dt * e_off[0] * off_after_on[i];
        p00[i] = std::clamp(stay_idle, 0.0, 1.0);
        p10[i] = std::clamp(1.0 - p11, 0.0, 1.0);
    }
    return OccupancyTable(dt, std::move(p00), std::move(p10));
}

UniformClosedForm closed_form_uniform_occupancy(double b, double t) {
    if (!(b > 0.0) || !(t > 0.0) || !(t < b))
        throw DomainError("closed-form occupancy needs 0 < t < b");
    const double step = 1.0; // u(t) on 0 < t < b
    const double decay = 4.0 - 4.0 * std::exp(-t / b);
    return {step - 2.0 * t / b * step - decay, (5.0 - 4.0 * std::exp(-t / b)) - step + 2.0 * t / b * step};
}

// ---------------------------------------------------------------------------
// Sampling

bool ToggleList::on_at(double t) const {
    const auto flips = std::upper_bound(times.begin(), times.end(), t) - times.begin();
    return initially_on != (flips % 2 == 1);
}

bool ToggleList::active_during(double t0, double t1) const {
    if (!(t1 > t0))
        return false;
    if (on_at(t0))
        return true;
    const auto next = std::upper_bound(times.begin(), times.end(), t0);
    return next != times.end() && *next < t1;
}

double ToggleList::on_time(double t0, double t1) const {
    if (!(t1 > t0))
        return 0.0;
    double total = 0.0;
    bool on = on_at(t0);
    double cursor = t0;
    for (auto it = std::upper_bound(times.begin(), times.end(), t0); it != times.end() && *it < t1;
         ++it) {
        if (on)
            total += *it - cursor;
        cursor = *it;
        on = !on;
    }
    if (on)
        total += t1 - cursor;
    return total;
}

namespace {

double warmup_span(const TrafficModel& model) {
    return 20.0 * (model.on_dist.mean() + model.off_dist.mean());
}

} // namespace

ToggleList sample_process(const TrafficModel& model, std::uint64_t seed, double horizon,
                          StartState start) {
    if (!(horizon > 0.0))
        throw DomainError("sample_process: horizon must be positive");
    std::mt19937_64 rng(seed);
    ToggleList out;

    double origin = 0.0;
    double next_flip = model.off_dist.sample(rng);
    bool on = false;
    if (start == StartState::Equilibrium) {
        const double cycle = model.on_dist.mean() + model.off_dist.mean();
        origin = warmup_span(model) + std::generate_canonical<double, 53>(rng) * cycle;
        while (next_flip <= origin) {
            on = !on;
            next_flip += (on ? model.on_dist : model.off_dist).sample(rng);
        }
    }
    out.initially_on = on;
    while (next_flip - origin < horizon) {
        out.times.push_back(next_flip - origin);
        on = !on;
        next_flip += (on ? model.on_dist : model.off_dist).sample(rng);
    }
    return out;
}

OccupancyEstimate mc_occupancy(const TrafficModel& model, double t, std::size_t n_trials,
                               std::uint64_t seed) {
    if (n_trials < 10000)
        throw ConfigError("mc_occupancy needs at least 10^4 trials");
    if (t < 0.0)
        throw DomainError("mc_occupancy: negative lag");

    std::mt19937_64 rng(seed);
    const double warmup = warmup_span(model);
    const double cycle = model.on_dist.mean() + model.off_dist.mean();
    std::size_t idle_ref = 0, idle_ref_idle_later = 0, busy_ref = 0, busy_ref_idle_later = 0;

    for (std::size_t trial = 0; trial < n_trials; ++trial) {
        const double ref = warmup + std::generate_canonical<double, 53>(rng) * cycle;
        bool on = false;
        double flip = model.off_dist.sample(rng);
        while (flip <= ref) {
            on = !on;
            flip += (on ? model.on_dist : model.off_dist).sample(rng);
        }
        const bool on_at_ref = on;
        const double later = ref + t;
        while (flip <= later) {
            on = !on;
            flip += (on ? model.on_dist : model.off_dist).sample(rng);
        }
        if (on_at_ref) {
            ++busy_ref;
            busy_ref_idle_later += on ? 0 : 1;
        } else {
            ++idle_ref;
            idle_ref_idle_later += on ? 0 : 1;
        }
    }

    OccupancyEstimate est;
    est.n_idle = idle_ref;
    est.n_busy = busy_ref;
    if (idle_ref > 0) {
        est.p00 = static_cast<double>(idle_ref_idle_later) / static_cast<double>(idle_ref);
        est.stderr_p00 = std::sqrt(est.p00 * (1.0 - est.p00) / static_cast<double>(idle_ref));
    }
    if (busy_ref > 0) {
        est.p10 = static_cast<double>(busy_ref_idle_later) / static_cast<double>(busy_ref);
        est.stderr_p10 = std::sqrt(est.p10 * (1.0 - est.p10) / static_cast<double>(busy_ref));
    }
    return est;
}

} // namespace adsense
