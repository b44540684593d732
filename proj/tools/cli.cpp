#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "xiflow/errors.hpp"

namespace xiflow::cli {

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"experiment runner for the xiflow dynamics library"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help"); // leave --h free for the step size

    // run --------------------------------------------------------------
    auto* run = app.add_subcommand("run", "execute an experiment and write its artifacts");
    run->set_help_flag("--help", "print help");
    std::string kind;
    run->add_option("kind", kind, "experiment kind")
        ->required()
        ->check(CLI::IsMember(experiment_kinds()));

    std::string config_path;
    run->add_option("--config", config_path, "JSON config file (flags override its values)");

    std::uint64_t seed = 0;
    std::string out_dir;
    double tol = 0.0, h = 0.0;
    int p = 0, grid = 0, dims = 0, n = 0, trials = 0, steps = 0, samples = 0;
    std::vector<double> b;
    auto* seed_opt = run->add_option("--seed", seed, "deterministic seed");
    auto* out_opt = run->add_option("--out", out_dir, "output directory")
                        ->envname("XIFLOW_OUT_DIR");
    auto* tol_opt = run->add_option("--tol", tol, "override the kind's default tolerance");
    auto* h_opt = run->add_option("--h", h, "finite-difference base step");
    auto* p_opt = run->add_option("--p", p, "prime modulus (zp)");
    auto* grid_opt = run->add_option("--grid", grid, "grid resolution (randers, arrow)");
    auto* b_opt = run->add_option("--b", b, "one-form components (randers)")->delimiter(',');
    auto* dims_opt = run->add_option("--dims", dims, "space dimension (randers, riemann)");
    auto* n_opt = run->add_option("--n", n, "matrix dimension / channel count");
    auto* trials_opt = run->add_option("--trials", trials, "number of random systems (quantum)");
    auto* steps_opt = run->add_option("--steps", steps, "chain length (htheorem)");
    auto* samples_opt = run->add_option("--samples", samples, "sample count");

    // report -----------------------------------------------------------
    auto* rep = app.add_subcommand("report", "summarize artifacts produced by run");
    rep->set_help_flag("--help", "print help");
    std::vector<std::string> paths;
    rep->add_option("paths", paths, "summary JSON files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (rep->parsed()) return report(paths);

        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = ExperimentConfig::from_json_file(config_path);
        cfg.kind = kind;
        if (*seed_opt) cfg.seed = seed;
        if (*out_opt) cfg.out_dir = out_dir;
        if (*tol_opt) cfg.tol = tol;
        if (*h_opt) cfg.h = h;
        if (*p_opt) cfg.p = p;
        if (*grid_opt) cfg.grid = grid;
        if (*b_opt) cfg.b = b;
        if (*dims_opt) cfg.dims = dims;
        if (*n_opt) cfg.n = n;
        if (*trials_opt) cfg.trials = trials;
        if (*steps_opt) cfg.steps = steps;
        if (*samples_opt) cfg.samples = samples;

        const Summary summary = run_experiment(cfg);
        for (const auto& c : summary.checks)
            std::cout << "[" << (c.pass ? "PASS" : "FAIL") << "] " << summary.experiment << ": "
                      << c.name << "\n";
        return summary.pass() ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace xiflow::cli
