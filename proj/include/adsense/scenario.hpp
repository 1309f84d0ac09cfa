#pragma once

#include "adsense/belief.hpp"
#include "adsense/reward.hpp"
#include "adsense/sensing.hpp"
#include "adsense/traffic.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace adsense {

/// Admissible sensing and transmission durations.
struct DurationBounds {
    double tx_min = 1.0;
    double tx_max = 30.0;
    double sense_min = 1.0;
    double sense_max = 10.0;

    void validate(const TrafficModel& traffic) const;
};

/// Discretisation of the (belief, time) state.
struct GridSpec {
    std::size_t n_p = 201;        ///< belief points, uniform on [0, 1]
    double dt = 1.0;
    double t_horizon = 1000.0;
    double duration_step = 1.0;   ///< candidate-duration lattice spacing

    void validate(const TrafficModel& traffic) const;

    /// Number of time columns including the horizon column.
    std::size_t n_t() const;
    double p_at(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(n_p - 1); }
};

struct Scenario {
    TrafficModel traffic{HoldDistribution::uniform(1000.0), HoldDistribution::uniform(1000.0)};
    SensingModel sensing = SensingModel::perfect_sensing();
    TxChannelModel channel{};
    CostModel costs{};
    DurationBounds bounds{};
    GridSpec grid{};
    double beta = 1.0;
    double t_idle = 5.0;

    /// Checks every invariant, throwing ConfigError with the offending key.
    /// Returns non-fatal warnings.
    std::vector<std::string> validate() const;
};

} // namespace adsense
