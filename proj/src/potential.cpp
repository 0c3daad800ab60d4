#include "nsac/potential.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "nsac/errors.hpp"
#include "nsac/log.hpp"

namespace nsac {

struct DoubleWell::Spline {
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
    double curvature_at_one;
    std::vector<double> samples;
};

DoubleWell DoubleWell::quartic(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("quartic scale must be positive");
    DoubleWell w;
    w.quartic_ = true;
    w.scale_ = scale;
    return w;
}

DoubleWell DoubleWell::tabulated(std::vector<double> samples) {
    const std::size_t n = samples.size();
    if (n < 5) throw ConfigError("tabulated potential needs at least 5 samples");
    double peak = 0.0;
    for (double v : samples) {
        if (!std::isfinite(v)) throw ConfigError("tabulated potential has non-finite samples");
        peak = std::max(peak, std::abs(v));
    }
    if (peak == 0.0) throw ConfigError("tabulated potential is identically zero");
    const double tol = 1e-12 * peak;
    if (std::abs(samples.front()) > tol || std::abs(samples.back()) > tol)
        throw ConfigError("tabulated potential must vanish at c = -1 and c = 1");
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(samples[k] - samples[n - 1 - k]) > tol)
            throw ConfigError("tabulated potential must be even in c");
        if (k > 0 && k + 1 < n && !(samples[k] > 0.0))
            throw ConfigError("tabulated potential must be positive on (-1, 1)");
    }
    samples.front() = 0.0;
    samples.back() = 0.0;
    const double step = 2.0 / static_cast<double>(n - 1);
    auto spline = std::make_shared<Spline>(Spline{
        boost::math::interpolators::cardinal_cubic_b_spline<double>(samples.data(), n, -1.0, step, 0.0, 0.0),
        0.0, samples});
    spline->curvature_at_one = spline->spline.double_prime(1.0);
    if (!(spline->curvature_at_one > 0.0)) throw ConfigError("tabulated potential needs f''(+-1) > 0");
    DoubleWell w;
    w.quartic_ = false;
    w.scale_ = 0.0;
    w.spline_ = std::move(spline);
    return w;
}

std::vector<double> DoubleWell::samples() const { return spline_ ? spline_->samples : std::vector<double>{}; }

double DoubleWell::f(double c) const {
    if (quartic_) {
        const double s = 1.0 - c * c;
        return 0.125 * scale_ * s * s;
    }
    const double a = std::abs(c);
    if (a <= 1.0) return spline_->spline(a);
    return 0.5 * spline_->curvature_at_one * (a - 1.0) * (a - 1.0);
}

double DoubleWell::df(double c) const {
    if (quartic_) return -0.5 * scale_ * c * (1.0 - c * c);
    const double a = std::abs(c);
    const double g = a <= 1.0 ? spline_->spline.prime(a) : spline_->curvature_at_one * (a - 1.0);
    return c < 0.0 ? -g : g;
}

double DoubleWell::d2f(double c) const {
    if (quartic_) return 0.5 * scale_ * (3.0 * c * c - 1.0);
    const double a = std::abs(c);
    return a <= 1.0 ? spline_->spline.double_prime(a) : spline_->curvature_at_one;
}

DensityPair DensityPair::make(double rho_plus, double rho_minus) {
    if (!(rho_plus > 0.0) || !(rho_minus > 0.0) || !std::isfinite(rho_plus) || !std::isfinite(rho_minus))
        throw ConfigError("phase densities must be positive");
    return {rho_plus, rho_minus};
}

double surface_tension_c0(const DoubleWell& well, double tolerance) {
    auto integrand = [&](double r) { return std::sqrt(2.0 * std::max(0.0, well.f(r))); };
    // a spline is only piecewise smooth: integrate knot to knot
    const int panels = well.is_quartic() ? 1 : static_cast<int>(well.samples().size()) - 1;
    const unsigned depth = panels == 1 ? 20 : 8;
    double value = 0.0, error = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = -1.0 + 2.0 * k / panels, b = -1.0 + 2.0 * (k + 1) / panels;
        double e = 0.0;
        value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, depth, 1e-15, &e);
        error += e;
    }
    if (!(error <= tolerance)) throw SolverError("surface tension quadrature did not converge", error);
    return value;
}

namespace {

double slope(const DoubleWell& well, const DensityPair& rho, double c) {
    if (!(c > -1.0 && c < 1.0)) return 0.0;
    return std::sqrt(2.0 * rho.rho_hat(c) * std::max(0.0, well.f(c)));
}

}  // namespace

struct PsiMap::Table {
    boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>> interp;
};

PsiMap::PsiMap(const DoubleWell& well, const DensityPair& densities, int intervals, double slack)
    : well_(well), densities_(densities), slack_(slack), warned_(std::make_shared<std::once_flag>()) {
    if (intervals < 16) throw ConfigError("psi table needs at least 16 intervals");
    const double step = 2.0 / intervals;
    std::vector<double> y(intervals + 1), dy(intervals + 1);
    auto g = [&](double r) { return slope(well_, densities_, r); };
    double acc = 0.0;
    for (int k = 0; k <= intervals; ++k) {
        const double c = -1.0 + k * step;
        if (k > 0) acc += boost::math::quadrature::gauss<double, 15>::integrate(g, c - step, c);
        y[k] = acc;
        dy[k] = g(c);
    }
    total_ = acc;
    table_ = std::make_shared<Table>(
        Table{boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>>(std::move(y), std::move(dy),
                                                                                       -1.0, step)});
}

double PsiMap::operator()(double c) const {
    if (std::isnan(c)) return c;
    if (std::abs(c) > 1.0 + slack_) {
        std::call_once(*warned_, [&] {
            std::ostringstream msg;
            msg << "order parameter " << c << " outside [-1, 1] beyond slack " << slack_ << "; clamped";
            log_warning(msg.str());
        });
    }
    if (c <= -1.0) return 0.0;
    if (c >= 1.0) return total_;
    return table_->interp(c);
}

double PsiMap::derivative(double c) const { return slope(well_, densities_, c); }

double optimal_profile_rk4(double s, double eps, const DoubleWell& well, const DensityPair& densities,
                           int steps_per_eps) {
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    if (s == 0.0) return 0.0;
    const double dir = s > 0.0 ? 1.0 : -1.0;
    auto rhs = [&](double c) { return dir * slope(well, densities, std::clamp(c, -1.0, 1.0)) / eps; };
    const double hs = eps / steps_per_eps;
    const long n = static_cast<long>(std::ceil(std::abs(s) / hs));
    const double dt = std::abs(s) / static_cast<double>(n);
    double c = 0.0;
    for (long k = 0; k < n; ++k) {
        const double k1 = rhs(c);
        const double k2 = rhs(c + 0.5 * dt * k1);
        const double k3 = rhs(c + 0.5 * dt * k2);
        const double k4 = rhs(c + dt * k3);
        c += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return std::clamp(c, -1.0, 1.0);
}

struct OptimalProfile::Table {
    boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>> interp;
    double reach;
    double low;
    double high;
};

OptimalProfile::OptimalProfile(double eps, const DoubleWell& well, const DensityPair& densities) : eps_(eps) {
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    if (well.is_quartic() && densities.uniform()) {
        closed_form_rate_ = 0.5 * std::sqrt(densities.rho_plus * well.quartic_scale());
        return;
    }
    // Linearised decay rate near the wells sets how far the table must reach.
    const double rate = std::sqrt(densities.min() * well.d2f(1.0)) / eps;
    const double reach = 40.0 / rate;
    const int steps_per_eps = 400;
    const double hs = eps / steps_per_eps;
    const int n = static_cast<int>(std::ceil(reach / hs));
    const double ds = reach / n;
    auto advance = [&](double dir) {
        std::vector<double> c(n + 1), dc(n + 1);
        auto rhs = [&](double x) { return dir * slope(well, densities, std::clamp(x, -1.0, 1.0)) / eps; };
        double x = 0.0;
        for (int k = 0; k <= n; ++k) {
            c[k] = x;
            dc[k] = rhs(x) * dir;  // slope with respect to s, not to the marching variable
            const double k1 = rhs(x);
            const double k2 = rhs(x + 0.5 * ds * k1);
            const double k3 = rhs(x + 0.5 * ds * k2);
            const double k4 = rhs(x + ds * k3);
            x = std::clamp(x + ds / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4), -1.0, 1.0);
        }
        return std::pair{c, dc};
    };
    auto [cp, dcp] = advance(1.0);
    auto [cm, dcm] = advance(-1.0);
    std::vector<double> y(2 * n + 1), dy(2 * n + 1);
    for (int k = 0; k <= n; ++k) {
        y[n + k] = cp[k];
        dy[n + k] = dcp[k];
        y[n - k] = cm[k];
        dy[n - k] = dcm[k];
    }
    const double low = y.front();
    const double high = y.back();
    table_ = std::make_shared<Table>(
        Table{boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>>(std::move(y), std::move(dy),
                                                                                       -reach, ds),
              reach, low, high});
}

double OptimalProfile::operator()(double s) const {
    if (closed_form_rate_ > 0.0) return std::tanh(closed_form_rate_ * s / eps_);
    if (s <= -table_->reach) return table_->low;
    if (s >= table_->reach) return table_->high;
    return table_->interp(s);
}

double optimal_profile(double s, double eps) {
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    return std::tanh(s / (2.0 * eps));
}

InitialPhase well_prepared_init(const geometry::AnalyticInterface& iface, const geometry::GeometryParams& params,
                                const Grid2D& grid, double eps, const DoubleWell& well,
                                const DensityPair& densities) {
    geometry::require_margin(iface, params, grid.Lx, grid.Ly, grid.periodic());
    const OptimalProfile profile(eps, well, densities);
    InitialPhase out{ScalarField(grid), ScalarField(grid)};
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double c = profile(geometry::signed_distance(iface, {grid.x(i), grid.y(j)}, 0.0));
            out.c(i, j) = c;
            out.rho(i, j) = densities.rho_hat(c);
        }
    }
    return out;
}

}  // namespace nsac
