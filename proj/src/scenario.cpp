#include "adsense/scenario.hpp"

#include "adsense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace adsense {

namespace {

constexpr double kSlack = 1e-9;

} // namespace

void DurationBounds::validate(const TrafficModel& traffic) const {
    if (!(tx_min > 0.0))
        throw ConfigError("must be positive", "bounds.tx_min");
    if (!(tx_max >= tx_min))
        throw ConfigError("must be at least tx_min", "bounds.tx_max");
    if (!(sense_min > 0.0))
        throw ConfigError("must be positive", "bounds.sense_min");
    if (!(sense_max >= sense_min))
        throw ConfigError("must be at least sense_min", "bounds.sense_max");
    // Persistence probabilities assume actions much shorter than both holds.
    const double cap = std::min(traffic.on_dist.mean(), traffic.off_dist.mean()) / 10.0;
    if (tx_max > cap + kSlack)
        throw ConfigError("must not exceed min(T_on, T_off)/10 = " + std::to_string(cap),
                          "bounds.tx_max");
    if (sense_max > cap + kSlack)
        throw ConfigError("must not exceed min(T_on, T_off)/10 = " + std::to_string(cap),
                          "bounds.sense_max");
}

std::size_t GridSpec::n_t() const {
    return static_cast<std::size_t>(std::llround(t_horizon / dt)) + 1;
}

void GridSpec::validate(const TrafficModel& traffic) const {
    if (n_p < 51)
        throw ConfigError("need at least 51 belief points", "grid.n_p");
    if (!(dt > 0.0))
        throw ConfigError("must be positive", "grid.dt");
    if (!(t_horizon >= dt))
        throw ConfigError("must be at least one time step", "grid.t_horizon");
    const double steps = t_horizon / dt;
    if (std::abs(steps - std::round(steps)) > 1e-6)
        throw ConfigError("must be a whole number of time steps", "grid.t_horizon");
    if (traffic.off_dist.kind() == HoldDistribution::Kind::Uniform &&
        t_horizon < traffic.off_dist.support_end() - kSlack)
        throw ConfigError("must cover the idle-hold support so persistence reaches zero",
                          "grid.t_horizon");
    if (!(duration_step > 0.0))
        throw ConfigError("must be positive", "grid.duration_step");
    const double finest = std::min(traffic.on_dist.mean(), traffic.off_dist.mean());
    if (dt > finest / 50.0 + kSlack)
        throw ConfigError("must not exceed min(T_on, T_off)/50 for the occupancy recursion",
                          "grid.dt");
}

std::vector<std::string> Scenario::validate() const {
    std::vector<std::string> warnings;
    sensing.validate();
    channel.validate();
    costs.validate();
    bounds.validate(traffic);
    grid.validate(traffic);

    if (!(beta >= 0.0 && beta <= 1.0))
        throw ConfigError("must lie in (0, 1]", "run.beta");
    if (beta == 1.0 && traffic.off_dist.kind() == HoldDistribution::Kind::Exponential)
        throw ConfigError("backward induction with beta = 1 needs a bounded idle hold; "
                          "use beta < 1 (value iteration) for exponential traffic",
                          "run.beta");
    if (!(t_idle >= grid.dt - kSlack))
        throw ConfigError("must be at least one time step", "run.t_idle");
    if (bounds.tx_min < grid.dt - kSlack)
        throw ConfigError("must be at least one time step", "bounds.tx_min");
    if (bounds.sense_min < grid.dt - kSlack)
        throw ConfigError("must be at least one time step", "bounds.sense_min");
    if (bounds.tx_min < costs.overhead - kSlack)
        throw ConfigError("shorter than the transmission overhead", "bounds.tx_min");
    if (std::abs(bounds.tx_min - costs.overhead) <= kSlack)
        warnings.emplace_back("bounds.tx_min equals costs.overhead: shortest transmission "
                              "carries no payload and is credited zero reward");
    return warnings;
}

} // namespace adsense
