// Command-line front end.  Exit codes: 0 success, 1 failed verification or
// refused rate fit, 2 configuration error, 3 solver abort / failed member.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "nsac/config.hpp"
#include "nsac/errors.hpp"
#include "nsac/geometry_checks.hpp"
#include "nsac/harness.hpp"
#include "nsac/log.hpp"

namespace {

constexpr int kFailed = 1;
constexpr int kConfigError = 2;
constexpr int kSolverAbort = 3;

int simulate(const std::string& path, bool exploratory) {
    const nsac::RunConfig cfg = nsac::load_run_config(path, exploratory);
    const nsac::RunSummary s = nsac::run_simulation(cfg);
    std::cout << nsac::format_report(s.directory);
    return 0;
}

int sweep(const std::string& path, bool exploratory, int workers) {
    const nsac::SweepSpec spec = nsac::load_sweep_spec(path, exploratory);
    const nsac::SweepResult r = nsac::run_sweep(spec, workers);
    std::cout << nsac::format_report(spec.output);
    for (const auto& m : r.members)
        if (!m.completed) return kSolverAbort;
    return r.complete() ? 0 : kFailed;
}

int verify_geometry(const std::string& path) {
    // geometry checks do not depend on the solver window
    const nsac::RunConfig cfg = nsac::load_run_config(path, true);
    const auto checks = nsac::geometry_property_suite(cfg.interface, cfg.geometry, cfg.grid);
    bool ok = true;
    for (const auto& c : checks) {
        std::printf("%s %-38s value %-12.5g bound %-10.4g %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value,
                    c.bound, c.detail.c_str());
        ok = ok && c.passed;
    }
    return ok ? 0 : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Navier-Stokes/Allen-Cahn sharp-interface limit simulator"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "log progress");

    std::string config, spec_path, run_dir;
    bool exploratory = false;
    auto* sim = app.add_subcommand("simulate", "run one simulation");
    sim->add_option("--config", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sim->add_flag("--allow-exploratory", exploratory, "accept theta outside -1/4 < theta <= 1");

    auto* sw = app.add_subcommand("sweep", "eps/theta sweep with rate fits");
    sw->add_option("--spec", spec_path, "sweep specification (JSON)")->required()->check(CLI::ExistingFile);
    sw->add_flag("--allow-exploratory", exploratory, "accept theta outside -1/4 < theta <= 1");

    auto* geo = app.add_subcommand("verify-geometry", "geometry and weight property suite");
    geo->add_option("--config", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);

    auto* rep = app.add_subcommand("report", "summarise a run or sweep directory");
    rep->add_option("--run-dir", run_dir, "run or sweep output directory")->required()->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kConfigError;
    }
    if (verbose) nsac::set_log_level(nsac::LogLevel::info);

    try {
        if (*sim) return simulate(config, exploratory);
        if (*sw) return sweep(spec_path, exploratory, nsac::worker_count());
        if (*geo) return verify_geometry(config);
        if (*rep) {
            std::cout << nsac::format_report(run_dir);
            return 0;
        }
    } catch (const nsac::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const nsac::UnsupportedScenarioError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "solver abort: " << e.what() << "\n";
        return kSolverAbort;
    }
    return kFailed;
}
