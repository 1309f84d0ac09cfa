#include "adsense/config.hpp"

#include "adsense/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace adsense {

namespace pt = boost::property_tree;

const char* to_string(RunMode m) {
    switch (m) {
    case RunMode::Traditional:
        return "traditional";
    case RunMode::AdaptivePerState:
        return "adaptive_per_state";
    case RunMode::AdaptiveLinear:
        return "adaptive_linear";
    }
    return "?";
}

RunMode parse_run_mode(const std::string& s) {
    if (s == "traditional")
        return RunMode::Traditional;
    if (s == "adaptive_per_state")
        return RunMode::AdaptivePerState;
    if (s == "adaptive_linear")
        return RunMode::AdaptiveLinear;
    throw ConfigError("expected traditional, adaptive_per_state or adaptive_linear, got '" + s + "'",
                      "run.mode");
}

std::vector<FixedDurations> RunConfig::fixed_families() const {
    std::vector<FixedDurations> out;
    for (double s : sense_list)
        out.push_back({s, t_tx});
    for (double t : tx_list)
        out.push_back({t_sense, t});
    if (out.empty())
        out.push_back({t_sense, t_tx});
    return out;
}

void RunConfig::validate() {
    warnings = scenario.validate();
    if (!(scenario.beta > 0.0))
        throw ConfigError("must lie in (0, 1]", "run.beta");
    if (gamma_steps < 2)
        throw ConfigError("need at least two gamma values", "run.gamma_steps");
    if (!(tol > 0.0))
        throw ConfigError("must be positive", "run.tol");
    if (episodes < 100)
        throw ConfigError("need at least 100 episodes", "run.episodes");
    const auto& b = scenario.bounds;
    auto check_sense = [&](double v, const char* key) {
        if (v < b.sense_min - 1e-9 || v > b.sense_max + 1e-9)
            throw ConfigError("outside [sense_min, sense_max]", key);
    };
    auto check_tx = [&](double v, const char* key) {
        if (v < b.tx_min - 1e-9 || v > b.tx_max + 1e-9)
            throw ConfigError("outside [tx_min, tx_max]", key);
    };
    check_sense(t_sense, "run.t_sense");
    check_tx(t_tx, "run.t_tx");
    for (double v : sense_list)
        check_sense(v, "run.sense_list");
    for (double v : tx_list)
        check_tx(v, "run.tx_list");
    for (double t : report_t)
        if (!(t >= 0.0 && t <= scenario.grid.t_horizon))
            throw ConfigError("report times must lie in [0, t_horizon]", "run.report_t");
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"traffic", {"dist", "b", "rate", "off_dist", "off_b", "off_rate", "on_dist", "on_b", "on_rate"}},
        {"sensing", {"perfect", "p_d", "snr_db", "sample_rate"}},
        {"channel", {"p_nc", "p_c"}},
        {"costs", {"k_idle", "k_sense", "k_tx", "reward", "overhead", "c_collision_max", "gamma"}},
        {"bounds", {"tx_min", "tx_max", "sense_min", "sense_max"}},
        {"grid", {"n_p", "dt", "t_horizon", "duration_step"}},
        {"run",
         {"t_idle", "beta", "mode", "t_sense", "t_tx", "sense_list", "tx_list", "gamma_steps", "seed",
          "episodes", "tol", "objective", "report_t"}},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& text, const std::string& key) {
    const std::string s = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("expected a number, got '" + text + "'", key);
    return v;
}

std::uint64_t to_unsigned(const std::string& text, const std::string& key) {
    const std::string s = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("expected a non-negative integer, got '" + text + "'", key);
    return v;
}

bool to_bool(const std::string& text, const std::string& key) {
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw ConfigError("expected true or false, got '" + text + "'", key);
}

std::vector<double> to_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty())
            out.push_back(to_double(item, key));
    return out;
}

class Section {
public:
    Section(const pt::ptree& tree, std::string name) : name_(std::move(name)) {
        if (const auto child = tree.get_child_optional(name_))
            node_ = &*child;
    }

    std::optional<std::string> raw(const std::string& key) const {
        if (!node_)
            return std::nullopt;
        if (const auto v = node_->get_optional<std::string>(pt::ptree::path_type(key, '\0')))
            return *v;
        return std::nullopt;
    }
    std::string full(const std::string& key) const { return name_ + "." + key; }

    void number(const std::string& key, double& target) const {
        if (const auto v = raw(key))
            target = to_double(*v, full(key));
    }
    void count(const std::string& key, std::size_t& target) const {
        if (const auto v = raw(key))
            target = static_cast<std::size_t>(to_unsigned(*v, full(key)));
    }

private:
    std::string name_;
    const pt::ptree* node_ = nullptr;
};

HoldDistribution make_hold(const std::string& kind, std::optional<double> b, std::optional<double> rate,
                           const std::string& prefix) {
    if (kind == "uniform") {
        if (!b)
            throw ConfigError("uniform hold needs b", "traffic." + prefix + "b");
        if (!(*b > 0.0))
            throw ConfigError("must be positive", "traffic." + prefix + "b");
        return HoldDistribution::uniform(*b);
    }
    if (kind == "exponential") {
        if (!rate)
            throw ConfigError("exponential hold needs rate", "traffic." + prefix + "rate");
        if (!(*rate > 0.0))
            throw ConfigError("must be positive", "traffic." + prefix + "rate");
        return HoldDistribution::exponential(*rate);
    }
    throw ConfigError("expected uniform or exponential, got '" + kind + "'",
                      "traffic." + prefix + "dist");
}

TrafficModel read_traffic(const Section& s) {
    auto num = [&](const std::string& key) -> std::optional<double> {
        if (const auto v = s.raw(key))
            return to_double(*v, s.full(key));
        return std::nullopt;
    };
    const std::string dist = trim(s.raw("dist").value_or("uniform"));
    std::optional<double> b = num("b");
    const std::optional<double> rate = num("rate");
    if (!b && !rate && dist == "uniform")
        b = 1000.0;
    auto side = [&](const std::string& prefix) {
        const std::string kind = trim(s.raw(prefix + "dist").value_or(dist));
        const auto side_b = num(prefix + "b");
        const auto side_rate = num(prefix + "rate");
        return make_hold(kind, side_b ? side_b : b, side_rate ? side_rate : rate, prefix);
    };
    return {side("off_"), side("on_")};
}

} // namespace

RunConfig parse_config_stream(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("line {}: {}", e.line(), e.message()));
    }

    for (const auto& [section, node] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) {
            if (node.empty())
                throw ConfigError("key outside any section", section);
            throw ConfigError("unknown section", section);
        }
        for (const auto& kv : node)
            if (!it->second.count(kv.first))
                throw ConfigError("unknown key", section + "." + kv.first);
    }

    RunConfig cfg;
    Scenario& sc = cfg.scenario;
    sc.traffic = read_traffic(Section(tree, "traffic"));

    const Section sensing(tree, "sensing");
    const bool perfect = to_bool(sensing.raw("perfect").value_or("true"), "sensing.perfect");
    if (perfect) {
        sc.sensing = SensingModel::perfect_sensing();
    } else {
        double p_d = 0.9, snr_db = -25.0, fs = 31250.0;
        sensing.number("p_d", p_d);
        sensing.number("snr_db", snr_db);
        sensing.number("sample_rate", fs);
        sc.sensing = SensingModel::energy_detector(p_d, snr_db, fs);
    }

    const Section channel(tree, "channel");
    channel.number("p_nc", sc.channel.p_nc);
    channel.number("p_c", sc.channel.p_c);

    const Section costs(tree, "costs");
    costs.number("k_idle", sc.costs.k_idle);
    costs.number("k_sense", sc.costs.k_sense);
    costs.number("k_tx", sc.costs.k_tx);
    costs.number("reward", sc.costs.reward_rate);
    costs.number("overhead", sc.costs.overhead);
    costs.number("c_collision_max", sc.costs.c_collision_max);
    costs.number("gamma", sc.costs.gamma);

    const Section bounds(tree, "bounds");
    bounds.number("tx_min", sc.bounds.tx_min);
    bounds.number("tx_max", sc.bounds.tx_max);
    bounds.number("sense_min", sc.bounds.sense_min);
    bounds.number("sense_max", sc.bounds.sense_max);

    const Section grid(tree, "grid");
    grid.count("n_p", sc.grid.n_p);
    grid.number("dt", sc.grid.dt);
    grid.number("t_horizon", sc.grid.t_horizon);
    grid.number("duration_step", sc.grid.duration_step);

    const Section run(tree, "run");
    run.number("t_idle", sc.t_idle);
    run.number("beta", sc.beta);
    if (const auto v = run.raw("mode"))
        cfg.mode = parse_run_mode(trim(*v));
    run.number("t_sense", cfg.t_sense);
    run.number("t_tx", cfg.t_tx);
    if (const auto v = run.raw("sense_list"))
        cfg.sense_list = to_list(*v, "run.sense_list");
    if (const auto v = run.raw("tx_list"))
        cfg.tx_list = to_list(*v, "run.tx_list");
    run.count("gamma_steps", cfg.gamma_steps);
    if (const auto v = run.raw("seed"))
        cfg.seed = to_unsigned(*v, "run.seed");
    run.count("episodes", cfg.episodes);
    run.number("tol", cfg.tol);
    if (const auto v = run.raw("objective")) {
        const std::string o = trim(*v);
        if (o == "value_at_start")
            cfg.objective = LinearObjective::ValueAtStart;
        else if (o == "simulated_mean")
            cfg.objective = LinearObjective::SimulatedMean;
        else
            throw ConfigError("expected value_at_start or simulated_mean, got '" + o + "'",
                              "run.objective");
    }
    if (const auto v = run.raw("report_t"))
        cfg.report_t = to_list(*v, "run.report_t");

    cfg.validate();
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    return parse_config_stream(in);
}

std::string default_config_text() {
    const RunConfig d;
    const Scenario& s = d.scenario;
    std::string out;
    out += "[traffic]\n";
    out += "; uniform | exponential, for both holds unless off_* / on_* keys override\n";
    out += "dist = uniform\n";
    out += fmt::format("b = {:g}\n", s.traffic.off_dist.parameter());
    out += "; rate = 0.002\n";
    out += "; off_dist, off_b, off_rate, on_dist, on_b, on_rate\n\n";
    out += "[sensing]\n";
    out += "perfect = true\n";
    out += "p_d = 0.9\n";
    out += "snr_db = -25\n";
    out += "; samples per time unit\n";
    out += "sample_rate = 31250\n\n";
    out += "[channel]\n";
    out += fmt::format("p_nc = {:g}\np_c = {:g}\n\n", s.channel.p_nc, s.channel.p_c);
    out += "[costs]\n";
    out += fmt::format("k_idle = {:g}\nk_sense = {:g}\nk_tx = {:g}\nreward = {:g}\noverhead = {:g}\n",
                       s.costs.k_idle, s.costs.k_sense, s.costs.k_tx, s.costs.reward_rate,
                       s.costs.overhead);
    out += fmt::format("c_collision_max = {:g}\ngamma = {:g}\n\n", s.costs.c_collision_max,
                       s.costs.gamma);
    out += "[bounds]\n";
    out += fmt::format("tx_min = {:g}\ntx_max = {:g}\nsense_min = {:g}\nsense_max = {:g}\n\n",
                       s.bounds.tx_min, s.bounds.tx_max, s.bounds.sense_min, s.bounds.sense_max);
    out += "[grid]\n";
    out += fmt::format("n_p = {}\ndt = {:g}\nt_horizon = {:g}\nduration_step = {:g}\n\n", s.grid.n_p,
                       s.grid.dt, s.grid.t_horizon, s.grid.duration_step);
    out += "[run]\n";
    out += fmt::format("t_idle = {:g}\nbeta = {:g}\n", s.t_idle, s.beta);
    out += "; traditional | adaptive_per_state | adaptive_linear\n";
    out += fmt::format("mode = {}\n", to_string(d.mode));
    out += fmt::format("t_sense = {:g}\nt_tx = {:g}\n", d.t_sense, d.t_tx);
    out += "; comma-separated traditional families: T_S values (with t_tx), T_T values (with t_sense)\n";
    out += "sense_list =\n";
    out += "tx_list =\n";
    out += fmt::format("gamma_steps = {}\nseed = {}\nepisodes = {}\ntol = {:g}\n", d.gamma_steps,
                       d.seed, d.episodes, d.tol);
    out += "; value_at_start | simulated_mean\n";
    out += "objective = value_at_start\n";
    out += "report_t = 0, 100, 200, 500, 900\n";
    return out;
}

} // namespace adsense
