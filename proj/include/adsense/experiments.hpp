#pragma once

// Figure and sweep data: gamma sweeps, threshold tables, utility components and
// the renewal cross-check, with their CSV writers.

#include "adsense/config.hpp"
#include "adsense/policy_search.hpp"
#include "adsense/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace adsense {

/// `steps` evenly spaced values from 0 to 1.
std::vector<double> gamma_grid(std::size_t steps);

/// Copy of `sc` with costs.gamma replaced.
Scenario with_gamma(Scenario sc, double gamma);

/// "{:.10g}", or "NA" for NaN.
std::string format_number(double v);
std::string format_optional(const std::optional<double>& v);

struct SweepRow {
    double gamma;
    RunMode mode;
    double ts_or_b0;   ///< T_S, or b0 in linear mode
    double b1;         ///< NaN unless linear
    double tt_or_a0;   ///< T_T, or a0 in linear mode
    double a1;         ///< NaN unless linear
    double us_at_start;
};

/// U_s(1, 0) for every fixed pair at every gamma, pair-major.
std::vector<SweepRow> sweep_traditional(const Scenario& sc, const std::vector<FixedDurations>& pairs,
                                        const std::vector<double>& gammas,
                                        std::shared_ptr<const OccupancyTable> occ = nullptr);

/// U_s(1, 0) of the per-state mode, with the durations it picks at (1, 0).
std::vector<SweepRow> sweep_per_state(const Scenario& sc, const std::vector<double>& gammas,
                                      std::shared_ptr<const OccupancyTable> occ = nullptr);

/// Best linear coefficients and their score at every gamma.
std::vector<SweepRow> sweep_linear(const Scenario& sc, const std::vector<double>& gammas,
                                   const LinearSearchOptions& opts,
                                   std::shared_ptr<const OccupancyTable> occ = nullptr);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct ThresholdRow {
    double t;
    Thresholds thresholds;
};

/// Thresholds at the grid columns nearest to `times`.
std::vector<ThresholdRow> threshold_rows(const BeliefMdp& mdp, const Solution& sol,
                                         const std::vector<double>& times);
void write_thresholds_csv(std::ostream& os, const std::vector<ThresholdRow>& rows);

struct ComponentRow {
    double p;
    double idle;
    double sense;
    double transmit;
    double utility;
};

/// I, S, T and U_s on the belief grid at time t.
std::vector<ComponentRow> component_rows(const BeliefMdp& mdp, const Solution& sol, double t);
void write_components_csv(std::ostream& os, const std::vector<ComponentRow>& rows);

struct RenewalRow {
    double t;
    double p10_volterra;
    std::optional<double> p10_appendix;   ///< uniform holds with 0 < t < b only
    double p10_mc;
    double mc_stderr;
};

std::vector<RenewalRow> renewal_rows(const TrafficModel& model, double dt,
                                     const std::vector<double>& times, std::size_t n_trials,
                                     std::uint64_t seed);
void write_renewal_csv(std::ostream& os, const std::vector<RenewalRow>& rows);

} // namespace adsense
