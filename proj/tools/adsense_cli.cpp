// adsense: solve, sweep, simulate and figure-data generation for adaptive
// sensing/transmission policies. All results are written as CSV.

#include "adsense/config.hpp"
#include "adsense/errors.hpp"
#include "adsense/experiments.hpp"
#include "adsense/policy_search.hpp"
#include "adsense/sim.hpp"
#include "adsense/solver.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#ifndef ADSENSE_PRESETS_DIR
#define ADSENSE_PRESETS_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace adsense;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string config;
    std::string out = ".";
    std::string presets = ADSENSE_PRESETS_DIR;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> gamma_steps;
    std::optional<std::string> mode;
    std::size_t trials = 1000000;
    int figure = 0;
};

RunConfig load(const Options& o, const std::string& fallback_preset = {}) {
    RunConfig cfg;
    if (!o.config.empty())
        cfg = parse_config(o.config);
    else if (!fallback_preset.empty())
        cfg = parse_config(fs::path(o.presets) / fallback_preset);
    else {
        std::istringstream empty;
        cfg = parse_config_stream(empty);
    }
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.gamma_steps)
        cfg.gamma_steps = *o.gamma_steps;
    if (o.mode)
        cfg.mode = parse_run_mode(*o.mode);
    cfg.validate();
    for (const auto& w : cfg.warnings)
        fmt::print(std::cerr, "warning: {}\n", w);
    return cfg;
}

std::ofstream open_out(const Options& o, const std::string& name) {
    fs::create_directories(o.out);
    const fs::path path = fs::path(o.out) / name;
    std::ofstream f(path);
    if (!f)
        throw ConfigError("cannot write " + path.string(), "--out");
    return f;
}

// Durations used by the DP in the configured mode; linear mode runs the
// coefficient search first.
DurationPolicy durations_for(const RunConfig& cfg, std::shared_ptr<const OccupancyTable> occ) {
    switch (cfg.mode) {
    case RunMode::Traditional:
        return FixedDurations{cfg.t_sense, cfg.t_tx};
    case RunMode::AdaptivePerState:
        return PerStateDurations{};
    case RunMode::AdaptiveLinear:
        return optimize_linear_policy(cfg.scenario, {cfg.objective, cfg.episodes, cfg.seed}, occ).coeffs;
    }
    return PerStateDurations{};
}

Solution solve(const BeliefMdp& mdp, const RunConfig& cfg) {
    if (cfg.scenario.beta < 1.0)
        return value_iteration(mdp, cfg.tol).solution;
    return backward_induction(mdp);
}

void run_solve(const Options& o) {
    const auto cfg = load(o);
    const auto occ = scenario_occupancy(cfg.scenario);
    const BeliefMdp mdp(cfg.scenario, durations_for(cfg, occ), occ);
    const auto sol = solve(mdp, cfg);
    check_threshold_structure(sol.policy);
    auto f = open_out(o, "thresholds.csv");
    write_thresholds_csv(f, threshold_rows(mdp, sol, cfg.report_t));
}

std::vector<SweepRow> sweep_rows(const RunConfig& cfg, RunMode mode) {
    const auto occ = scenario_occupancy(cfg.scenario);
    const auto gammas = gamma_grid(cfg.gamma_steps);
    switch (mode) {
    case RunMode::Traditional:
        return sweep_traditional(cfg.scenario, cfg.fixed_families(), gammas, occ);
    case RunMode::AdaptivePerState:
        return sweep_per_state(cfg.scenario, gammas, occ);
    case RunMode::AdaptiveLinear:
        return sweep_linear(cfg.scenario, gammas, {cfg.objective, cfg.episodes, cfg.seed}, occ);
    }
    return {};
}

void run_sweep(const Options& o) {
    const auto cfg = load(o);
    auto f = open_out(o, "sweep.csv");
    write_sweep_csv(f, sweep_rows(cfg, cfg.mode));
}

void run_simulate(const Options& o) {
    const auto cfg = load(o);
    const auto occ = scenario_occupancy(cfg.scenario);
    auto mdp = std::make_shared<const BeliefMdp>(cfg.scenario, durations_for(cfg, occ), occ);
    auto sol = std::make_shared<const Solution>(solve(*mdp, cfg));
    const auto policy = greedy_policy(mdp, sol);
    const auto s = evaluate(policy, cfg.scenario, *occ, cfg.episodes, cfg.seed);

    auto f = open_out(o, "summary.csv");
    fmt::print(f, "mode,episodes,dp_value_at_start,mean_utility,stderr,ci95,collision_fraction,"
                  "payload_fraction,mean_length,n_idle,n_sense,n_transmit\n");
    fmt::print(f, "{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(cfg.mode), s.episodes,
               format_number(sol->values.at(mdp->n_p() - 1, 0)), format_number(s.mean_utility),
               format_number(s.stderr_utility), format_number(s.ci95),
               format_number(s.collision_fraction), format_number(s.payload_fraction),
               format_number(s.mean_length), s.action_counts[0], s.action_counts[1],
               s.action_counts[2]);
    auto tf = open_out(o, "trace.csv");
    write_trace_csv(tf, run_episode(policy, cfg.scenario, *occ, episode_seed(cfg.seed, 0)));
}

void run_renewal(const Options& o) {
    const auto cfg = load(o);
    auto f = open_out(o, "renewal.csv");
    write_renewal_csv(f, renewal_rows(cfg.scenario.traffic, cfg.scenario.grid.dt,
                                      {1.0, 5.0, 10.0, 50.0, 200.0, 500.0}, o.trials, cfg.seed));
}

void run_fig(const Options& o) {
    const int n = o.figure;
    if (n < 2 || n > 8)
        throw ConfigError("figure number must be in 2..8", "fig");
    const auto cfg = load(o, fmt::format("fig{}.ini", n));

    if (n == 2) {
        const BeliefMdp mdp(cfg.scenario, FixedDurations{cfg.t_sense, cfg.t_tx});
        const auto sol = solve(mdp, cfg);
        check_threshold_structure(sol.policy);
        auto th = open_out(o, "fig2_thresholds.csv");
        write_thresholds_csv(th, threshold_rows(mdp, sol, cfg.report_t));
        auto comp = open_out(o, "fig2_components.csv");
        write_components_csv(comp, component_rows(mdp, sol, 200.0));
        return;
    }

    auto rows = sweep_rows(cfg, RunMode::Traditional);
    if (n >= 6) {
        for (const auto mode : {RunMode::AdaptivePerState, RunMode::AdaptiveLinear}) {
            auto extra = sweep_rows(cfg, mode);
            rows.insert(rows.end(), extra.begin(), extra.end());
        }
    }
    auto f = open_out(o, fmt::format("fig{}_sweep.csv", n));
    write_sweep_csv(f, rows);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive sensing and transmission durations for opportunistic spectrum access"};
    app.fallthrough();
    Options o;
    bool print_defaults = false;

    app.add_flag("--print-defaults", print_defaults, "Print every config key with its default");
    app.add_option("--config", o.config, "INI config file");
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
    app.add_option("--presets", o.presets, "Preset directory used by `fig`")->capture_default_str();
    app.add_option("--seed", o.seed, "Override run.seed");
    app.add_option("--gamma-steps", o.gamma_steps, "Override run.gamma_steps");
    app.add_option("--mode", o.mode, "traditional | adaptive_per_state | adaptive_linear");

    auto* solve_cmd = app.add_subcommand("solve", "Solve the DP and write thresholds.csv");
    auto* sweep_cmd = app.add_subcommand("sweep", "Gamma sweep of U_s(1, 0), sweep.csv");
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo evaluation, summary.csv and trace.csv");
    auto* renewal_cmd = app.add_subcommand("renewal-check", "Occupancy cross-check, renewal.csv");
    renewal_cmd->add_option("--trials", o.trials, "Monte Carlo trials per lag")->capture_default_str();
    auto* fig_cmd = app.add_subcommand("fig", "Data behind figure N (2..8)");
    fig_cmd->add_option("N", o.figure, "Figure number")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (print_defaults) {
            std::cout << default_config_text();
            return 0;
        }
        if (*solve_cmd)
            run_solve(o);
        else if (*sweep_cmd)
            run_sweep(o);
        else if (*sim_cmd)
            run_simulate(o);
        else if (*renewal_cmd)
            run_renewal(o);
        else if (*fig_cmd)
            run_fig(o);
        else {
            std::cout << app.help();
            return kExitConfig;
        }
    } catch (const ConfigError& e) {
        fmt::print(std::cerr, "config error: {}\n", e.what());
        return kExitConfig;
    } catch (const StructuralViolation& e) {
        fmt::print(std::cerr, "structural violation at column {}: {}\n", e.column(), e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return kExitNumerical;
    }
    return 0;
}
