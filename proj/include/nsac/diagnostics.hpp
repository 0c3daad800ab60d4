#pragma once

#include <array>
#include <string>
#include <vector>

#include "nsac/geometry.hpp"
#include "nsac/potential.hpp"
#include "nsac/sharp.hpp"
#include "nsac/solver.hpp"

namespace nsac {

/// Geometric fields sampled at cell centres for one time.
struct GeometryFields {
    ScalarField distance;
    VectorField xi;
    ScalarField div_xi;
    ScalarField theta;
};

GeometryFields geometry_fields(const geometry::AnalyticInterface& iface, const geometry::GeometryParams& params,
                               const Grid2D& grid, double t);

/// Everything the functionals need besides the two states.
struct DiagnosticContext {
    geometry::GeometryParams geometry;
    double eps = 0.04;
    double mobility = 1.0;
    double c0 = 2.0 / 3.0;
    const DoubleWell* well = nullptr;
    const PsiMap* psi = nullptr;
};

inline constexpr int kCoercivityTerms = 5;
inline constexpr std::array<const char*, kCoercivityTerms> kCoercivityNames = {
    "modulated", "weighted_energy", "interface", "tilt", "equipartition_weighted"};

struct EnergyReport {
    double t = 0.0;
    double E = 0.0;
    double E_rearranged = 0.0;
    double E_vol = 0.0;
    double equip = 0.0;
    double interface_err = 0.0;
    std::array<double, kCoercivityTerms> coercivity_lhs{};
    std::array<double, kCoercivityTerms> coercivity_ratio{};
    bool coercivity_degenerate = false;  // E below 1e-14; ratios reported as 0
    double diss_gradw = 0.0;
    double diss_mu = 0.0;
    double diss_xi = 0.0;
    double diss_theta = 0.0;
    double l1_psi = 0.0;
    double identity_residual = 0.0;  // filled from consecutive states; NaN if unavailable
    double ginzburg_landau = 0.0;
    double kinetic = 0.0;
    double max_abs_c = 0.0;
    double coupling_c_eta01 = 0.0;
    double coupling_c_eta1 = 0.0;
    double tangential_c = 0.0;
    double tubular_lhs_grid = 0.0;
    double tubular_lhs_quadrature = 0.0;
    double tubular_c = 0.0;
};

/// Names of the CSV columns written for an EnergyReport, in order.
std::vector<std::string> energy_report_columns();
std::vector<double> energy_report_values(const EnergyReport& report);

/// n_eps = grad c / |grad c| where |grad c| > 1e-8 / h, else 0.
VectorField normal_field(const ScalarField& c);

/// E = 1/2 int (rho_eps - rho)^2 + rho_eps |v_eps - v|^2
///     + int eps/2 |grad c|^2 + rho_eps f(c)/eps - xi . grad psi(c).
/// grad c uses central differences with c = -1 on walls and
/// grad psi = psi'(c) grad c.
double relative_energy(const SimState& sim, const SharpState& sharp, const GeometryFields& geo,
                       const DiagnosticContext& ctx);

/// Rearranged form: the modulated part, the equipartition defect
/// 1/2 int (sqrt(eps)|grad c| - sqrt(2 rho_eps f / eps))^2, the interface
/// error int (1 - xi . n_eps)|grad psi| and the density-slaving remainder
/// int (sqrt(2 rho_eps f) - psi'(c)) |grad c|, which vanishes when
/// rho_eps = rho_hat(c_eps).
double relative_energy_rearranged(const SimState& sim, const SharpState& sharp, const GeometryFields& geo,
                                  const DiagnosticContext& ctx);

/// E_vol = int |c0 chi - psi(c)| |theta(d)|.
double bulk_error(const SimState& sim, const SharpState& sharp, const GeometryFields& geo,
                  const DiagnosticContext& ctx);

double l1_interface_error(const SimState& sim, const SharpState& sharp, const DiagnosticContext& ctx);

/// (GL(b) - GL(a)) / dt + m int mu_b^2 - int eps grad v_b : (I - n n) |grad c_b|^2.
double energy_identity_residual(const SimState& a, const SimState& b, double dt, const DiagnosticContext& ctx);

/// Same, with the energy of the earlier state already known; stores the
/// energy of `after` in *gl_after so a time loop evaluates it once per step.
double energy_identity_residual(double gl_before, const SimState& after, double dt, const DiagnosticContext& ctx,
                                double* gl_after = nullptr);

/// All functionals at one time.
EnergyReport energy_report(const SimState& sim, const SharpState& sharp, const DiagnosticContext& ctx);

struct GronwallFit {
    double C = 0.0;
    bool admissible = false;
    std::string note;
};

/// Smallest C >= 0 with S(t_i) <= exp(C t_i) (S(0) + C t_i eps^(1/3)) for
/// every sample (bisection to relative 1e-10).  Requires >= 10 samples;
/// throws std::invalid_argument otherwise.
GronwallFit gronwall_monitor(const std::vector<double>& t, const std::vector<double>& series, double eps);

/// Relative spread max |C_i - mean| / mean of fitted constants; 0 when all are 0.
double gronwall_spread(const std::vector<double>& constants);

/// Bilinear interpolation of a cell-centred field (clamped at the walls,
/// wrapped on periodic grids).
double sample_bilinear(const ScalarField& f, geometry::Vec2 x);

}  // namespace nsac
