#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xiflow::cli {

/// Configuration problems exit with status 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds{"zp",      "flow-axioms", "randers", "riemann",
                                                "quantum", "htheorem",    "thermo",  "arrow"};
    return kinds;
}

/// One experiment run: a kind plus kind-specific parameters. A fixed seed
/// makes the run fully deterministic (byte-identical artifacts).
struct ExperimentConfig {
    std::string kind;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    double tol = 0.0; // 0 = use the kind's pinned default

    int p = 7;                      // zp
    int grid = 64;                  // randers / arrow
    std::vector<double> b{0.3, 0.0}; // randers
    int dims = 2;                   // randers / riemann
    int n = 16;                     // quantum / htheorem channels
    int trials = 100;               // quantum
    int steps = 1000;               // htheorem
    double h = 1e-3;                // finite-difference step
    int samples = 1000;             // flow-axioms / riemann sample counts

    static ExperimentConfig from_json_file(const std::string& path);
    void apply_json(const nlohmann::json& j);
    void validate() const; // throws ConfigError
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct Summary {
    std::string experiment;
    std::uint64_t seed = 0;
    nlohmann::json params;
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts; // files written, relative to out_dir

    bool pass() const;
    nlohmann::json to_json() const;
};

/// Executes the experiment, writes its CSV artifacts and <kind>_summary.json
/// under cfg.out_dir, and returns the summary.
Summary run_experiment(const ExperimentConfig& cfg);

/// Prints a human-readable pass/fail digest of summary files produced by run.
/// Returns 0 when every loaded summary passes, 1 otherwise; throws
/// ConfigError for unreadable paths.
int report(const std::vector<std::string>& paths);

/// Full command-line entry point (subcommands `run` and `report`).
int cli_main(int argc, const char* const* argv);

} // namespace xiflow::cli
