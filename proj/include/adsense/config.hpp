#pragma once

// INI run configuration: [traffic] [sensing] [channel] [costs] [bounds] [grid] [run].

#include "adsense/policy_search.hpp"
#include "adsense/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace adsense {

enum class RunMode { Traditional, AdaptivePerState, AdaptiveLinear };

const char* to_string(RunMode m);
RunMode parse_run_mode(const std::string& s);

struct RunConfig {
    Scenario scenario;
    RunMode mode = RunMode::Traditional;
    double t_sense = 1.0;                ///< traditional sensing time
    double t_tx = 10.0;                  ///< traditional transmission time
    std::vector<double> sense_list;      ///< traditional families swept by `sweep`
    std::vector<double> tx_list;
    std::size_t gamma_steps = 11;
    std::uint64_t seed = 1;
    std::size_t episodes = 10000;
    double tol = 1e-6;
    LinearObjective objective = LinearObjective::ValueAtStart;
    std::vector<double> report_t{0.0, 100.0, 200.0, 500.0, 900.0};
    std::vector<std::string> warnings;

    /// Fixed duration pairs of the traditional families: every sense_list entry
    /// with t_tx, then every tx_list entry with t_sense. Falls back to
    /// (t_sense, t_tx) when both lists are empty.
    std::vector<FixedDurations> fixed_families() const;

    /// Checks the scenario and the run keys; fills `warnings`.
    void validate();
};

/// Reads and validates a config file. Throws ConfigError naming the key (or
/// the line, for syntax errors).
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_stream(std::istream& in);

/// Every key with its default value, in the file format.
std::string default_config_text();

} // namespace adsense
