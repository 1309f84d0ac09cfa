#include "adsense/experiments.hpp"

#include "adsense/errors.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace adsense {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::shared_ptr<const OccupancyTable> ensure(const Scenario& sc,
                                             std::shared_ptr<const OccupancyTable> occ) {
    return occ ? occ : scenario_occupancy(sc);
}

} // namespace

std::vector<double> gamma_grid(std::size_t steps) {
    if (steps < 2)
        throw ConfigError("need at least two gamma values", "run.gamma_steps");
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i)
        out[i] = static_cast<double>(i) / static_cast<double>(steps - 1);
    return out;
}

Scenario with_gamma(Scenario sc, double gamma) {
    sc.costs.gamma = gamma;
    return sc;
}

std::string format_number(double v) {
    if (std::isnan(v))
        return "NA";
    return fmt::format("{:.10g}", v);
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("NA");
}

std::vector<SweepRow> sweep_traditional(const Scenario& sc, const std::vector<FixedDurations>& pairs,
                                        const std::vector<double>& gammas,
                                        std::shared_ptr<const OccupancyTable> occ) {
    occ = ensure(sc, std::move(occ));
    std::vector<SweepRow> rows;
    ValueTable values;
    const std::size_t top = sc.grid.n_p - 1;
    for (const auto& pair : pairs)
        for (double g : gammas) {
            const BeliefMdp mdp(with_gamma(sc, g), pair, occ);
            backward_induction_values(mdp, values);
            rows.push_back({g, RunMode::Traditional, pair.sense, kNaN, pair.tx, kNaN, values.at(top, 0)});
        }
    return rows;
}

std::vector<SweepRow> sweep_per_state(const Scenario& sc, const std::vector<double>& gammas,
                                      std::shared_ptr<const OccupancyTable> occ) {
    occ = ensure(sc, std::move(occ));
    std::vector<SweepRow> rows;
    const std::size_t top = sc.grid.n_p - 1;
    for (double g : gammas) {
        const BeliefMdp mdp(with_gamma(sc, g), PerStateDurations{}, occ);
        const auto sol = backward_induction(mdp);
        const auto av = mdp.bellman_values(sol.values, 1.0, 0.0);
        rows.push_back({g, RunMode::AdaptivePerState, av.sense_time, kNaN, av.tx_time, kNaN,
                        sol.values.at(top, 0)});
    }
    return rows;
}

std::vector<SweepRow> sweep_linear(const Scenario& sc, const std::vector<double>& gammas,
                                   const LinearSearchOptions& opts,
                                   std::shared_ptr<const OccupancyTable> occ) {
    occ = ensure(sc, std::move(occ));
    std::vector<SweepRow> rows;
    for (double g : gammas) {
        const auto res = optimize_linear_policy(with_gamma(sc, g), opts, occ);
        rows.push_back({g, RunMode::AdaptiveLinear, res.coeffs.b0, res.coeffs.b1, res.coeffs.a0,
                        res.coeffs.a1, res.score});
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    fmt::print(os, "gamma,mode,Ts_or_b0,b1,Tt_or_a0,a1,Us_at_start\n");
    for (const auto& r : rows)
        fmt::print(os, "{},{},{},{},{},{},{}\n", format_number(r.gamma), to_string(r.mode),
                   format_number(r.ts_or_b0), format_number(r.b1), format_number(r.tt_or_a0),
                   format_number(r.a1), format_number(r.us_at_start));
}

std::vector<ThresholdRow> threshold_rows(const BeliefMdp& mdp, const Solution& sol,
                                         const std::vector<double>& times) {
    std::vector<ThresholdRow> rows;
    const double dt = mdp.scenario().grid.dt;
    for (double t : times) {
        const auto k = static_cast<std::size_t>(std::llround(t / dt));
        if (k >= mdp.n_t())
            throw ConfigError("report time beyond the horizon", "run.report_t");
        rows.push_back({mdp.time_at(k), extract_thresholds(mdp, sol, k)});
    }
    return rows;
}

void write_thresholds_csv(std::ostream& os, const std::vector<ThresholdRow>& rows) {
    fmt::print(os, "t,p1_star,p2_star\n");
    for (const auto& r : rows)
        fmt::print(os, "{},{},{}\n", format_number(r.t), format_optional(r.thresholds.p1),
                   format_optional(r.thresholds.p2));
}

std::vector<ComponentRow> component_rows(const BeliefMdp& mdp, const Solution& sol, double t) {
    std::vector<ComponentRow> rows;
    for (std::size_t i = 0; i < mdp.n_p(); ++i) {
        const double p = mdp.p_at(i);
        const auto av = mdp.bellman_values(sol.values, p, t);
        rows.push_back({p, av.idle, av.sense, av.transmit, av.best_value()});
    }
    return rows;
}

void write_components_csv(std::ostream& os, const std::vector<ComponentRow>& rows) {
    fmt::print(os, "p,I,S,T,U\n");
    for (const auto& r : rows)
        fmt::print(os, "{},{},{},{},{}\n", format_number(r.p), format_number(r.idle),
                   format_number(r.sense), format_number(r.transmit), format_number(r.utility));
}

std::vector<RenewalRow> renewal_rows(const TrafficModel& model, double dt,
                                     const std::vector<double>& times, std::size_t n_trials,
                                     std::uint64_t seed) {
    double horizon = 0.0;
    for (double t : times)
        horizon = std::max(horizon, t);
    const auto occ = solve_occupancy(model, dt, std::max(horizon, dt));
    const bool closed_form = model.off_dist.kind() == HoldDistribution::Kind::Uniform &&
                             model.on_dist.kind() == HoldDistribution::Kind::Uniform &&
                             model.off_dist.parameter() == model.on_dist.parameter();
    std::vector<RenewalRow> rows;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        const auto mc = mc_occupancy(model, t, n_trials, seed + j);
        RenewalRow r{t, occ.p10_at(t), std::nullopt, mc.p10, mc.stderr_p10};
        if (closed_form && t > 0.0 && t < model.off_dist.parameter())
            r.p10_appendix = closed_form_uniform_occupancy(model.off_dist.parameter(), t).p10;
        rows.push_back(r);
    }
    return rows;
}

void write_renewal_csv(std::ostream& os, const std::vector<RenewalRow>& rows) {
    fmt::print(os, "t,p10_volterra,p10_appendix,p10_mc,mc_stderr\n");
    for (const auto& r : rows)
        fmt::print(os, "{},{},{},{},{}\n", format_number(r.t), format_number(r.p10_volterra),
                   format_optional(r.p10_appendix), format_number(r.p10_mc),
                   format_number(r.mc_stderr));
}

} // namespace adsense
