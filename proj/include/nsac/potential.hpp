#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "nsac/geometry.hpp"
#include "nsac/grid.hpp"

namespace nsac {

/// Symmetric double well with minima at +-1.  Either the quartic
/// f(c) = k (1 - c^2)^2 / 8 (k = 1 by default) or a cubic spline through
/// samples on a uniform grid over [-1, 1] with f'(+-1) = 0.  Outside
/// [-1, 1] the spline is continued by its osculating parabola.
class DoubleWell {
public:
    static DoubleWell quartic(double scale = 1.0);
    /// Throws ConfigError unless the samples are symmetric, vanish at the
    /// endpoints and are positive inside.
    static DoubleWell tabulated(std::vector<double> samples);

    double f(double c) const;
    double df(double c) const;
    double d2f(double c) const;

    bool is_quartic() const { return quartic_; }
    double quartic_scale() const { return scale_; }
    std::string name() const { return quartic_ ? "quartic" : "tabulated"; }
    /// Samples a tabulated well was built from (empty for the quartic).
    std::vector<double> samples() const;

private:
    struct Spline;
    bool quartic_ = true;
    double scale_ = 1.0;
    std::shared_ptr<const Spline> spline_;
};

/// Phase densities.  rho_hat interpolates linearly in the order parameter.
struct DensityPair {
    double rho_plus = 1.0;
    double rho_minus = 1.0;

    static DensityPair make(double rho_plus, double rho_minus);
    double rho_hat(double c) const { return rho_minus + (rho_plus - rho_minus) * 0.5 * (1.0 + c); }
    double min() const { return rho_plus < rho_minus ? rho_plus : rho_minus; }
    double max() const { return rho_plus < rho_minus ? rho_minus : rho_plus; }
    bool uniform() const { return rho_plus == rho_minus; }
};

/// c0 = int_{-1}^{1} sqrt(2 f(r)) dr by adaptive Gauss-Kronrod quadrature.
/// Throws SolverError when the error estimate exceeds `tolerance`.
double surface_tension_c0(const DoubleWell& well, double tolerance = 1e-10);

/// psi(c) = int_{-1}^{c} sqrt(2 rho_hat(r) f(r)) dr, tabulated once and
/// evaluated by cubic Hermite interpolation with exact slopes.  Arguments are
/// clamped to [-1, 1]; a warning is logged the first time |c| exceeds
/// 1 + slack.
class PsiMap {
public:
    PsiMap(const DoubleWell& well, const DensityPair& densities, int intervals = 4096, double slack = 0.05);

    double operator()(double c) const;
    /// d psi / dc = sqrt(2 rho_hat f), zero outside (-1, 1).
    double derivative(double c) const;
    double total() const { return total_; }

    const DoubleWell& well() const { return well_; }
    const DensityPair& densities() const { return densities_; }

private:
    struct Table;
    DoubleWell well_;
    DensityPair densities_;
    double slack_;
    double total_ = 0.0;
    std::shared_ptr<const Table> table_;
    std::shared_ptr<std::once_flag> warned_;
};

/// Integrates eps c' = sqrt(2 rho_hat(c) f(c)) from c(0) = 0 to s with the
/// classical fourth-order Runge-Kutta method.
double optimal_profile_rk4(double s, double eps, const DoubleWell& well, const DensityPair& densities,
                           int steps_per_eps = 400);

/// One-dimensional optimal profile c(s).  Closed form tanh(s / (2 eps)) for
/// the unit quartic with rho = 1 (tanh(a s / eps) for any quartic with
/// constant density); otherwise a Hermite table built from the RK4 solution.
class OptimalProfile {
public:
    OptimalProfile(double eps, const DoubleWell& well, const DensityPair& densities);
    double operator()(double s) const;
    double eps() const { return eps_; }

private:
    struct Table;
    double eps_;
    double closed_form_rate_ = 0.0;  // > 0 when the closed form applies
    std::shared_ptr<const Table> table_;
};

double optimal_profile(double s, double eps);

struct InitialPhase {
    ScalarField c;
    ScalarField rho;
};

/// c0(x) = optimal profile of d(x), rho0 = rho_hat(c0).  Throws ConfigError
/// if the interface is closer than 3 delta to the walls.
InitialPhase well_prepared_init(const geometry::AnalyticInterface& iface, const geometry::GeometryParams& params,
                                const Grid2D& grid, double eps, const DoubleWell& well,
                                const DensityPair& densities);

}  // namespace nsac
