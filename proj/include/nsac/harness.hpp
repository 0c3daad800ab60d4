#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nsac/config.hpp"
#include "nsac/diagnostics.hpp"

namespace nsac {

/// Outcome of one simulation.  Run directories contain
///   config.json    resolved configuration
///   monitors.csv   one row per step (invariant log)
///   report.csv     energy report at every report time
///   summary.json   this record
///   <field>_<k>.bin/.json  snapshots (k = 0 initial, then per snapshot time)
struct RunSummary {
    std::filesystem::path directory;
    std::string scenario;
    double eps = 0.0;
    double theta = 0.0;
    int nx = 0;
    int ny = 0;
    std::string status = "ok";  // "ok" or "aborted"
    std::string error;
    long steps = 0;
    double t_final = 0.0;
    double runtime_seconds = 0.0;
    double dt_min = 0.0;
    double dt_max = 0.0;

    bool clean = true;
    long violation_count = 0;
    std::vector<std::string> violations;  // first few, verbatim

    double max_abs_c = 0.0;
    double max_divergence = 0.0;
    double max_poisson_residual = 0.0;
    double rho_sup_initial = 0.0;
    double rho_sup_max = 0.0;
    double rho_inf_initial = 0.0;
    double rho_inf_min = 0.0;
    double max_abs_identity_residual = 0.0;

    std::vector<EnergyReport> reports;
    double final_total = 0.0;  // (E + E_vol) at the last report
    double sup_l1_psi = 0.0;
    GronwallFit gronwall;
    /// Largest report time up to which the Gronwall fit is admissible (NaN
    /// with fewer than 10 reports).
    double gronwall_horizon = 0.0;
};

/// Runs the configured simulation into config.output.directory (created;
/// existing files are overwritten).  Solver failures are recorded in
/// summary.json and rethrown.
RunSummary run_simulation(const RunConfig& config);

nlohmann::ordered_json to_json(const RunSummary& summary);

struct RateFit {
    std::string functional;
    double theta = 0.0;
    std::vector<std::pair<double, double>> pairs;  // (eps, value)
    double slope = 0.0;
    double intercept = 0.0;
    /// Root-mean-square residual of the log-log fit (natural log).
    double residual = 0.0;
    std::vector<double> excluded_eps;
};

/// Least-squares line through (ln eps, ln value).  Throws
/// std::invalid_argument with fewer than 3 pairs, non-positive entries or
/// coincident eps values.
RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs, std::string functional = {});

struct SweepMember {
    double eps = 0.0;
    int n = 0;
    double theta = 0.0;
    bool refined = false;  // the extra run on the twice finer grid
    std::filesystem::path directory;
    bool completed = false;
    bool excluded = false;
    std::string note;
    RunSummary summary;
};

struct CoercivityComparison {
    double theta = 0.0;
    double eps = 0.0;
    int n = 0;
    int n_fine = 0;
    /// max over common non-degenerate report times of |r_fine / r - 1| per ratio
    std::vector<double> max_relative_change;
    int samples = 0;
    bool finite = true;
    bool within = false;
};

struct GronwallSummary {
    double theta = 0.0;
    std::vector<double> eps;
    std::vector<double> constants;
    double spread = 0.0;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepMember> members;
    std::vector<RateFit> fits;
    std::vector<GronwallSummary> gronwall;
    std::vector<CoercivityComparison> coercivity;
    std::vector<std::string> errors;
    double runtime_seconds = 0.0;

    bool complete() const { return errors.empty(); }
};

/// Worker count: NSAC_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs every member (parallel, at most `workers`) and writes rates.json into
/// spec.output.  Member failures are collected in `errors`; the fits use the
/// members that completed with a clean invariant log.  A fit that cannot be
/// formed is recorded as an error as well.
SweepResult run_sweep(const SweepSpec& spec, int workers = worker_count());

nlohmann::ordered_json to_json(const SweepResult& result);

/// Human-readable digest of a run directory (summary.json, report.csv) or a
/// sweep directory (rates.json).  Throws ConfigError if neither is present.
std::string format_report(const std::filesystem::path& dir);

}  // namespace nsac
