#pragma once

#include <string>

#include "nsac/geometry.hpp"
#include "nsac/grid.hpp"
#include "nsac/potential.hpp"

namespace nsac {

enum class ScenarioType { static_bubble, transported_bubble, quiescent };

std::string to_string(ScenarioType type);
ScenarioType scenario_type_from_string(const std::string& name);

/// Reference solution of the sharp-interface problem sampled on a grid.
/// The pressure is piecewise constant with p_in - p_out = c0 / R (the
/// Laplace jump, higher inside the bubble) and normalised to zero mean.
struct SharpState {
    ScenarioType type = ScenarioType::static_bubble;
    double t = 0.0;
    geometry::AnalyticInterface interface;
    ScalarField chi;
    ScalarField rho;
    VectorField v;
    ScalarField p;
    double pressure_jump = 0.0;
};

/// Bubble indicator with area fractions on cells cut by the circle
/// (estimated from `subsamples` x `subsamples` sub-cell points).
ScalarField chi_field(const geometry::AnalyticInterface& iface, const Grid2D& grid, double t = 0.0,
                      int subsamples = 32);

/// Resting circular bubble: v = 0, Laplace pressure jump c0 / R.
/// Throws ConfigError when the 3 delta margin to the walls is violated.
SharpState static_bubble(const Grid2D& grid, const geometry::AnalyticInterface& iface,
                         const geometry::GeometryParams& params, const DensityPair& densities, double c0);

/// Bubble carried by the uniform flow iface.velocity on a periodic box.
/// Throws UnsupportedScenarioError on walled grids.
SharpState transported_bubble(const Grid2D& grid, const geometry::AnalyticInterface& iface,
                              const geometry::GeometryParams& params, const DensityPair& densities, double c0,
                              double t);

/// Single exterior phase at rest (chi = 0, rho = rho_minus).
SharpState quiescent_state(const Grid2D& grid, const DensityPair& densities);

/// Dispatches on the scenario type.
SharpState sharp_state(ScenarioType type, const Grid2D& grid, const geometry::AnalyticInterface& iface,
                       const geometry::GeometryParams& params, const DensityPair& densities, double c0, double t);

}  // namespace nsac
