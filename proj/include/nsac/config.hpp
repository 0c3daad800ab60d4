#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "nsac/geometry.hpp"
#include "nsac/grid.hpp"
#include "nsac/potential.hpp"
#include "nsac/sharp.hpp"
#include "nsac/solver.hpp"

namespace nsac {

struct OutputConfig {
    std::filesystem::path directory = "run";
    double t_end = 0.1;
    /// Spacing of energy reports (report.csv); the time loop lands on them exactly.
    double report_interval = 0.01;
    /// Spacing of field snapshots; 0 writes only the initial and final state.
    double snapshot_interval = 0.0;
    std::vector<std::string> snapshot_fields = {"c", "rho", "p", "vx", "vy", "mu"};
    /// Evaluate the energy identity residual every step (monitors.csv column).
    bool identity_monitor = true;
};

/// Fully resolved run configuration.  The JSON layout is
///
///   { "grid":      {nx, ny, Lx, Ly, bc},
///     "geometry":  {shape, center, radius, translation_velocity, delta},
///     "potential": {type, rho_plus, rho_minus, samples},
///     "scenario":  {type, R, center, densities, v_uniform},
///     "solver":    {eps, m0, theta, dt, cfl, ac_factor, diffusive_factor, ...},
///     "output":    {directory, t_end, report_interval, snapshot_interval, ...} }
///
/// The scenario block may restate the geometry/potential values; a value
/// given in both places must agree.  Unknown keys are rejected.
struct RunConfig {
    Grid2D grid;
    ScenarioType scenario = ScenarioType::static_bubble;
    geometry::AnalyticInterface interface;
    geometry::GeometryParams geometry;
    DensityPair densities = DensityPair::make(1.0, 1.0);
    SolverParams solver;
    OutputConfig output;
    bool allow_exploratory = false;
};

/// Parses and validates (grid, solver window, resolution guard, interface
/// margin over [0, t_end]).  Throws ConfigError.
RunConfig parse_run_config(const nlohmann::json& j, bool allow_exploratory = false);
RunConfig load_run_config(const std::filesystem::path& path, bool allow_exploratory = false);

/// Canonical JSON form (every field explicit); parse_run_config inverts it.
nlohmann::ordered_json to_json(const RunConfig& config);

nlohmann::json read_json_file(const std::filesystem::path& path);

struct SweepSpec {
    std::string name = "sweep";
    /// Run-config template; grid size, eps, theta and output are set per member.
    nlohmann::json base;
    std::vector<double> eps;
    std::vector<int> grids;
    std::vector<double> theta = {0.0};
    double t_end = 0.1;
    double report_interval = 0.01;
    std::filesystem::path output = "sweep";
    /// Also run every member on the twice finer grid (coercivity refinement check).
    bool mesh_refinement = false;
    bool snapshots = false;
    bool allow_exploratory = false;
};

/// Layout: {name, base | base_config, eps, grids, theta, t_end,
/// report_interval, output, mesh_refinement, snapshots}.  A relative
/// base_config path is resolved against `origin`.  Throws ConfigError.
SweepSpec parse_sweep_spec(const nlohmann::json& j, bool allow_exploratory = false,
                           const std::filesystem::path& origin = {});
SweepSpec load_sweep_spec(const std::filesystem::path& path, bool allow_exploratory = false);

/// Run configuration of one sweep member (validated).
RunConfig member_config(const SweepSpec& spec, double eps, int n, double theta,
                        const std::filesystem::path& directory);

}  // namespace nsac
