#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dfix/metrics.hpp"

namespace dfix {

/// Fully resolved experiment description. Parsed from a flat key-value
/// config file; defaults depend on the experiment (see parse_config).
struct ExperimentConfig {
    std::string experiment;           ///< degree-sweep | method-compare-kriging |
                                      ///< method-compare-sdd | time-varying-sweep | custom
    std::uint64_t seed = 1;
    int n = 100;                      ///< agents == equations
    int m = 8;                        ///< regular-graph degree (fixed-graph experiments)
    std::vector<int> degrees;         ///< degree-sweep parameter points
    std::vector<double> radii;        ///< method-compare-kriging parameter points
    std::vector<double> gammas;       ///< time-varying-sweep edge fractions
    std::vector<Method> methods;
    double tol = 1e-4;
    std::int64_t max_iter = 200000;
    double theta = 0.999;             ///< relaxation safety factor, (0, 1]
    int repetitions = 1;
    double box = 30.0;                ///< kriging sites live in [-box, box]^2
    std::string placement = "random"; ///< "random" or "grid" kriging sites
    std::string system_file;          ///< custom experiment input
};

/// Parses and validates a config document: `key = value` lines, '#'
/// comments, lists comma-separated. Applies per-experiment defaults.
/// Unknown keys, keys that do not apply to the chosen experiment, missing
/// required keys and out-of-range values all throw ConfigError naming the
/// field.
[[nodiscard]] ExperimentConfig parse_config(std::istream& in);

/// Built-in scaled-down config for `dfix demo <experiment>`.
[[nodiscard]] ExperimentConfig demo_config(const std::string& experiment);

/// Human-readable dump of a resolved config (one key per line).
void print_config(const ExperimentConfig& cfg, std::ostream& out);

/// One (parameter point, repetition, method) outcome; `param` is rendered
/// exactly as it appears in the summary CSV.
struct SummaryRow {
    std::string method;
    std::string param;
    int repetition = 0;
    std::int64_t iterations = 0;
    std::int64_t total_flops = 0;
    std::int64_t total_traffic = 0;
    std::string status;
};

struct ExperimentResult {
    std::vector<SummaryRow> rows;
    bool all_converged = false;
    std::filesystem::path summary_path;
};

/// Runs every (parameter, repetition, method) combination of the config.
/// Problem instances are drawn from one PRNG stream per repetition, seeded
/// with `seed + repetition`, so results never depend on which methods or
/// parameter points are enabled. Writes one trace CSV per run plus
/// summary.csv into out_dir, prints per-parameter averages to `log`, and
/// reports whether every run converged. Independent runs execute
/// concurrently; outputs are identical to sequential execution.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace dfix
