// Acceptance run: one PASS/FAIL line per primary criterion.

#include "adsense/config.hpp"
#include "adsense/errors.hpp"
#include "adsense/experiments.hpp"
#include "adsense/policy_search.hpp"
#include "adsense/sensing.hpp"
#include "adsense/sim.hpp"
#include "adsense/solver.hpp"
#include "adsense/traffic.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

using namespace adsense;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

RunConfig preset(const std::string& name) {
    return parse_config(std::string(ADSENSE_PRESETS_DIR) + "/" + name + ".ini");
}

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : "none"; }

std::size_t column_of(const BeliefMdp& mdp, double t) {
    return static_cast<std::size_t>(std::lround(t / mdp.scenario().grid.dt));
}

// Linear-coefficient searches are the expensive part, so each one runs once.
class LinearCache {
public:
    const LinearSearchResult& get(const std::string& name, double gamma) {
        const auto key = std::make_pair(name, gamma);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            const auto cfg = preset(name);
            it = cache_.emplace(key, optimize_linear_policy(with_gamma(cfg.scenario, gamma))).first;
        }
        return it->second;
    }
    const auto& all() const { return cache_; }

private:
    std::map<std::pair<std::string, double>, LinearSearchResult> cache_;
};

LinearCache linear_cache;

const std::vector<std::string> kSweepPresets{"fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};

struct PresetSweep {
    std::vector<SweepRow> traditional;
    std::vector<SweepRow> per_state;
};

std::map<std::string, PresetSweep> sweep_cache;

const PresetSweep& preset_sweep(const std::string& name) {
    auto it = sweep_cache.find(name);
    if (it == sweep_cache.end()) {
        const auto cfg = preset(name);
        const auto occ = scenario_occupancy(cfg.scenario);
        const auto gammas = gamma_grid(11);
        PresetSweep s{sweep_traditional(cfg.scenario, cfg.fixed_families(), gammas, occ),
                      sweep_per_state(cfg.scenario, gammas, occ)};
        it = sweep_cache.emplace(name, std::move(s)).first;
    }
    return it->second;
}

// ---------------------------------------------------------------------------

Outcome fig2_thresholds() {
    const auto cfg = preset("fig2");
    const BeliefMdp mdp(cfg.scenario, FixedDurations{cfg.t_sense, cfg.t_tx});
    const auto sol = backward_induction(mdp);
    const auto th = extract_thresholds(mdp, sol, column_of(mdp, 200.0));
    const bool ok = th.p1 && th.p2 && std::abs(*th.p1 - 0.3939) <= 0.02 &&
                    std::abs(*th.p2 - 0.9522) <= 0.02;
    return {ok, fmt::format("t=200 p1*={} p2*={}, expected (0.3939, 0.9522) +/- 0.02", opt(th.p1),
                            opt(th.p2))};
}

Outcome threshold_structure() {
    std::size_t tables = 0;
    std::string bad;
    auto check = [&](const std::string& what, const BeliefMdp& mdp) {
        const auto sol = backward_induction(mdp);
        ++tables;
        if (const auto col = find_structure_violation(sol.policy); col && bad.empty())
            bad = fmt::format("{} column {}", what, *col);
    };
    for (const std::string name :
         {"baseline", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"}) {
        const auto cfg = preset(name);
        const auto occ = scenario_occupancy(cfg.scenario);
        for (const auto& f : cfg.fixed_families())
            check(fmt::format("{} fixed ({}, {})", name, f.sense, f.tx), BeliefMdp(cfg.scenario, f, occ));
        check(name + " per-state", BeliefMdp(cfg.scenario, PerStateDurations{}, occ));
        if (cfg.mode == RunMode::AdaptiveLinear) {
            const auto& res = linear_cache.get(name, cfg.scenario.costs.gamma);
            check(name + " linear", BeliefMdp(cfg.scenario, res.coeffs, occ));
        }
    }
    return {bad.empty(), bad.empty() ? fmt::format("{} policy tables, no violations", tables)
                                     : "violation in " + bad};
}

Outcome convexity() {
    const auto cfg = preset("fig2");
    const BeliefMdp mdp(cfg.scenario, FixedDurations{cfg.t_sense, cfg.t_tx});
    const auto sol = backward_induction(mdp);
    double worst_mono = 0.0, worst_convex = 0.0;
    for (double t : {0.0, 100.0, 200.0, 500.0, 900.0}) {
        const auto k = column_of(mdp, t);
        for (std::size_t i = 0; i + 1 < mdp.n_p(); ++i)
            worst_mono = std::min(worst_mono, sol.values.at(i + 1, k) - sol.values.at(i, k));
        for (std::size_t i = 1; i + 1 < mdp.n_p(); ++i)
            worst_convex = std::min(worst_convex, sol.values.at(i - 1, k) + sol.values.at(i + 1, k) -
                                                      2.0 * sol.values.at(i, k));
    }
    const bool ok = worst_mono >= -1e-9 && worst_convex >= -1e-9;
    return {ok, fmt::format("min step {:.3g}, min second difference {:.3g} (tolerance -1e-9)",
                            worst_mono, worst_convex)};
}

Outcome no_overhead_degeneration() {
    const auto cfg = preset("fig7");
    const auto& b = cfg.scenario.bounds;
    const LinearDurations expected{b.tx_min, 0.0, b.sense_min, 0.0};
    std::string detail;
    bool ok = true;
    for (double g : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto& c = linear_cache.get("fig7", g).coeffs;
        ok = ok && c == expected;
        detail += fmt::format("g={}:({},{},{},{}) ", g, c.a0, c.a1, c.b0, c.b1);
    }
    return {ok, detail + fmt::format("expected ({},0,{},0)", b.tx_min, b.sense_min)};
}

Outcome overhead_sensing_fixed() {
    const auto cfg = preset("fig6");
    const auto& b = cfg.scenario.bounds;
    std::set<std::pair<double, double>> tx_coeffs;
    bool b_ok = true;
    std::string detail;
    for (double g : gamma_grid(cfg.gamma_steps)) {
        const auto& c = linear_cache.get("fig6", g).coeffs;
        b_ok = b_ok && c.b0 == b.sense_min && c.b1 == 0.0;
        tx_coeffs.emplace(c.a0, c.a1);
        detail += fmt::format("g={}:({},{},{},{}) ", g, c.a0, c.a1, c.b0, c.b1);
    }
    const bool ok = b_ok && tx_coeffs.size() >= 2;
    return {ok, detail + fmt::format("distinct (a0,a1): {}", tx_coeffs.size())};
}

Outcome imperfect_full_gamma() {
    const auto cfg = preset("fig5");
    const auto sc = with_gamma(cfg.scenario, 1.0);
    const BeliefMdp mdp(sc, PerStateDurations{});
    const auto sol = backward_induction(mdp);
    const auto av = mdp.bellman_values(sol.values, 1.0, 0.0);
    const bool ok = av.tx_time == sc.bounds.tx_max && av.sense_time == sc.bounds.sense_min;
    return {ok, fmt::format("T_T={} T_S={} at (1,0), expected T_T={} T_S={}", av.tx_time,
                            av.sense_time, sc.bounds.tx_max, sc.bounds.sense_min)};
}

Outcome dominance() {
    double worst = 1e300;
    std::string where;
    std::size_t comparisons = 0;
    for (const auto& name : kSweepPresets) {
        const auto& s = preset_sweep(name);
        for (const auto& row : s.traditional) {
            const auto it = std::find_if(s.per_state.begin(), s.per_state.end(),
                                         [&](const SweepRow& r) { return r.gamma == row.gamma; });
            const double margin = it->us_at_start - row.us_at_start;
            ++comparisons;
            if (margin < worst) {
                worst = margin;
                where = fmt::format("{} g={} ({}, {})", name, row.gamma, row.ts_or_b0, row.tt_or_a0);
            }
        }
    }
    return {worst >= -1e-9,
            fmt::format("{} comparisons, smallest margin {:.3g} at {}", comparisons, worst, where)};
}

Outcome gamma_monotonicity() {
    double worst = 1e300;
    std::string where;
    for (const auto& name : kSweepPresets) {
        const auto& rows = preset_sweep(name).traditional;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].ts_or_b0 != rows[i - 1].ts_or_b0 || rows[i].tt_or_a0 != rows[i - 1].tt_or_a0)
                continue;
            const double step = rows[i].us_at_start - rows[i - 1].us_at_start;
            if (step < worst) {
                worst = step;
                where = fmt::format("{} ({}, {}) g={}", name, rows[i].ts_or_b0, rows[i].tt_or_a0,
                                    rows[i].gamma);
            }
        }
    }
    return {worst >= -1e-9, fmt::format("smallest increment {:.3g} at {}", worst, where)};
}

Outcome imperfect_interior_optimum() {
    const auto cfg = preset("fig5");
    std::map<double, std::pair<double, int>> avg;
    for (const auto& row : preset_sweep("fig5").traditional) {
        auto& a = avg[row.ts_or_b0];
        a.first += row.us_at_start;
        ++a.second;
    }
    double best_ts = 0.0, best = -1e300;
    for (const auto& [ts, a] : avg)
        if (a.first / a.second > best) {
            best = a.first / a.second;
            best_ts = ts;
        }
    const bool ok = best_ts > 1.0 && best_ts < 10.0;
    return {ok, fmt::format("gamma-averaged U_s(1,0) peaks at T_S={} ({:.4f})", best_ts, best)};
}

Outcome renewal_oracle() {
    const TrafficModel uniform{HoldDistribution::uniform(1000.0), HoldDistribution::uniform(1000.0)};
    const double dt = 1.0;
    const auto rows = renewal_rows(uniform, dt, {1.0, 5.0, 10.0, 50.0, 200.0, 500.0}, 1000000, 2024);
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        const double tol = std::max(3.0 * r.mc_stderr, 2.0 * dt / 1000.0);
        const double gap = std::abs(r.p10_volterra - r.p10_mc);
        ok = ok && gap <= tol;
        detail += fmt::format("t={}:{:.2g}/{:.2g} ", r.t, gap, tol);
    }
    const double l_off = 0.002, l_on = 0.004;
    const TrafficModel expo{HoldDistribution::exponential(l_off), HoldDistribution::exponential(l_on)};
    const auto occ = solve_occupancy(expo, dt, 2000.0);
    const double pi0 = l_on / (l_on + l_off);
    double worst = 0.0;
    for (std::size_t j = 0; j < occ.p10().size(); ++j) {
        const double decay = std::exp(-(l_on + l_off) * dt * static_cast<double>(j));
        worst = std::max({worst, std::abs(occ.p00()[j] - (pi0 + (1.0 - pi0) * decay)),
                          std::abs(occ.p10()[j] - pi0 * (1.0 - decay))});
    }
    ok = ok && worst <= 1e-3;
    return {ok, detail + fmt::format("exponential max error {:.2g}", worst)};
}

Outcome false_alarm_spot_checks() {
    using big = boost::multiprecision::cpp_bin_float_50;
    const auto cfg = preset("fig5");
    const auto& m = cfg.scenario.sensing;
    auto oracle = [&](double ts) {
        const big snr = boost::multiprecision::pow(big(10), big(-25) / 10);
        const big root2 = boost::multiprecision::sqrt(big(2));
        const big qinv = root2 * boost::math::erfc_inv(2 * big(m.p_d));
        const big arg = boost::multiprecision::sqrt(2 * snr + 1) * qinv +
                        boost::multiprecision::sqrt(big(ts) * big(m.sample_rate)) * snr;
        return static_cast<double>(boost::math::erfc(arg / root2) / 2);
    };
    bool ok = true;
    std::string detail;
    for (const auto& [ts, nominal] : {std::pair{1.0, 0.766}, std::pair{10.0, 0.315}}) {
        const double v = false_alarm_prob(m, ts), o = oracle(ts);
        ok = ok && std::abs(v - o) <= 1e-3 && std::abs(o - nominal) <= 1e-3;
        detail += fmt::format("P_fa({})={:.5f} oracle {:.5f} nominal {} ", ts, v, o, nominal);
    }
    return {ok, detail};
}

Outcome method_cross_validation() {
    const auto cfg = preset("fig2");
    const FixedDurations d{cfg.t_sense, cfg.t_tx};
    const BeliefMdp bi_mdp(cfg.scenario, d);
    const auto bi = backward_induction(bi_mdp);
    auto sc = cfg.scenario;
    sc.beta = 0.999;
    const BeliefMdp vi_mdp(sc, d);
    const auto vi = value_iteration(vi_mdp, 1e-6);
    const auto a = extract_thresholds(bi_mdp, bi, column_of(bi_mdp, 200.0));
    const auto b = extract_thresholds(vi_mdp, vi.solution, column_of(vi_mdp, 200.0));
    auto close = [](const std::optional<double>& x, const std::optional<double>& y) {
        return x.has_value() == y.has_value() && (!x || std::abs(*x - *y) <= 0.03);
    };
    const bool ok = close(a.p1, b.p1) && close(a.p2, b.p2);
    return {ok, fmt::format("BI ({}, {}) VI ({}, {}) after {} sweeps", opt(a.p1), opt(a.p2), opt(b.p1),
                            opt(b.p2), vi.iterations)};
}

Outcome simulation_consistency() {
    auto sc = with_gamma(preset("baseline").scenario, 1.0);
    // The primary stays once it returns, so episodes run to the horizon as the DP does.
    sc.traffic.on_dist = HoldDistribution::exponential(1e-7);
    const auto occ = scenario_occupancy(sc);
    const Decision always{Action::Transmit, 10.0};
    const BeliefMdp mdp(sc, FixedDurations{sc.bounds.sense_min, always.duration}, occ);
    const double v = evaluate_fixed_decision(mdp, always, false).at(mdp.n_p() - 1, 0);
    const auto s = evaluate(fixed_action_policy(always), sc, *occ, 100000, 1);
    const bool ok = std::abs(s.mean_utility - v) <= s.ci95;
    return {ok, fmt::format("simulated {:.4f} +/- {:.4f}, DP {:.4f}", s.mean_utility, s.ci95, v)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"fig2_threshold_reproduction", fig2_thresholds},
        {"threshold_structure", threshold_structure},
        {"convexity_monotonicity", convexity},
        {"perfect_no_overhead_degeneration", no_overhead_degeneration},
        {"perfect_overhead_fixed_sensing", overhead_sensing_fixed},
        {"imperfect_gamma1_durations", imperfect_full_gamma},
        {"adaptive_dominance", dominance},
        {"gamma_monotonicity", gamma_monotonicity},
        {"imperfect_interior_optimum", imperfect_interior_optimum},
        {"renewal_oracle_equivalence", renewal_oracle},
        {"false_alarm_spot_checks", false_alarm_spot_checks},
        {"method_cross_validation", method_cross_validation},
        {"simulation_consistency", simulation_consistency},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        fmt::print("{} {}: {} [{:.1f}s]\n", r.pass ? "PASS" : "FAIL", name, r.detail, took.count());
        std::fflush(stdout);
        failed += r.pass ? 0 : 1;
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
