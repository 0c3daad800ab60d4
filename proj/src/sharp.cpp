#include "nsac/sharp.hpp"

#include <cmath>

#include "nsac/errors.hpp"

namespace nsac {

std::string to_string(ScenarioType type) {
    switch (type) {
        case ScenarioType::static_bubble: return "static_bubble";
        case ScenarioType::transported_bubble: return "transported_bubble";
        case ScenarioType::quiescent: return "quiescent";
    }
    return "unknown";
}

ScenarioType scenario_type_from_string(const std::string& name) {
    if (name == "static_bubble") return ScenarioType::static_bubble;
    if (name == "transported_bubble") return ScenarioType::transported_bubble;
    if (name == "quiescent") return ScenarioType::quiescent;
    throw UnsupportedScenarioError("unknown scenario type '" + name + "'");
}

ScalarField chi_field(const geometry::AnalyticInterface& iface, const Grid2D& grid, double t, int subsamples) {
    if (subsamples < 1) throw ConfigError("chi_field needs at least one subsample");
    const double h = grid.h();
    const double half_diag = h * std::sqrt(0.5);
    ScalarField chi(grid);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const geometry::Vec2 xc{grid.x(i), grid.y(j)};
            const double d = geometry::signed_distance(iface, xc, t);
            if (d >= half_diag) {
                chi(i, j) = 1.0;
                continue;
            }
            if (d <= -half_diag) continue;
            int inside = 0;
            for (int b = 0; b < subsamples; ++b) {
                for (int a = 0; a < subsamples; ++a) {
                    const geometry::Vec2 x{xc.x + h * ((a + 0.5) / subsamples - 0.5),
                                           xc.y + h * ((b + 0.5) / subsamples - 0.5)};
                    if (geometry::signed_distance(iface, x, t) > 0.0) ++inside;
                }
            }
            chi(i, j) = static_cast<double>(inside) / (subsamples * subsamples);
        }
    }
    return chi;
}

namespace {

SharpState build(ScenarioType type, const Grid2D& grid, const geometry::AnalyticInterface& iface,
                 const DensityPair& densities, double c0, double t, geometry::Vec2 velocity) {
    SharpState s;
    s.type = type;
    s.t = t;
    s.interface = iface;
    s.chi = chi_field(iface, grid, t);
    s.rho = ScalarField(grid);
    s.p = ScalarField(grid);
    s.v = VectorField(grid, velocity.x, velocity.y);
    s.pressure_jump = c0 / iface.radius;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        s.rho[k] = densities.rho_minus + (densities.rho_plus - densities.rho_minus) * s.chi[k];
        s.p[k] = s.pressure_jump * s.chi[k];
    }
    const double mean = s.p.mean();
    for (std::size_t k = 0; k < grid.size(); ++k) s.p[k] -= mean;
    return s;
}

}  // namespace

SharpState static_bubble(const Grid2D& grid, const geometry::AnalyticInterface& iface,
                         const geometry::GeometryParams& params, const DensityPair& densities, double c0) {
    geometry::AnalyticInterface still = iface;
    still.velocity = {};
    geometry::require_margin(still, params, grid.Lx, grid.Ly, grid.periodic());
    return build(ScenarioType::static_bubble, grid, still, densities, c0, 0.0, {});
}

SharpState transported_bubble(const Grid2D& grid, const geometry::AnalyticInterface& iface,
                              const geometry::GeometryParams& params, const DensityPair& densities, double c0,
                              double t) {
    if (!grid.periodic()) throw UnsupportedScenarioError("transported_bubble requires a periodic grid");
    geometry::AnalyticInterface moving = iface;
    moving.period = geometry::Vec2{grid.Lx, grid.Ly};
    geometry::require_margin(moving, params, grid.Lx, grid.Ly, true);
    return build(ScenarioType::transported_bubble, grid, moving, densities, c0, t, moving.velocity);
}

SharpState quiescent_state(const Grid2D& grid, const DensityPair& densities) {
    SharpState s;
    s.type = ScenarioType::quiescent;
    s.interface = geometry::AnalyticInterface::circle({0.5 * grid.Lx, 0.5 * grid.Ly}, 1.0);
    s.chi = ScalarField(grid);
    s.rho = ScalarField(grid, densities.rho_minus);
    s.p = ScalarField(grid);
    s.v = VectorField(grid);
    return s;
}

SharpState sharp_state(ScenarioType type, const Grid2D& grid, const geometry::AnalyticInterface& iface,
                       const geometry::GeometryParams& params, const DensityPair& densities, double c0, double t) {
    switch (type) {
        case ScenarioType::static_bubble: return static_bubble(grid, iface, params, densities, c0);
        case ScenarioType::transported_bubble:
            return transported_bubble(grid, iface, params, densities, c0, t);
        case ScenarioType::quiescent: return quiescent_state(grid, densities);
    }
    throw UnsupportedScenarioError("unknown scenario");
}

}  // namespace nsac
