#include "nsac/geometry.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nsac/errors.hpp"

namespace nsac::geometry {

AnalyticInterface AnalyticInterface::circle(Vec2 center, double radius, Vec2 velocity, std::optional<Vec2> period) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("circle radius must be positive");
    if (period && !(period->x > 0.0 && period->y > 0.0)) throw ConfigError("period lengths must be positive");
    AnalyticInterface out;
    out.center = center;
    out.radius = radius;
    out.velocity = velocity;
    out.period = period;
    return out;
}

Vec2 AnalyticInterface::center_at(double t) const { return center + t * velocity; }

Vec2 AnalyticInterface::offset(Vec2 x, double t) const {
    Vec2 d = x - center_at(t);
    if (period) {
        d.x -= period->x * std::round(d.x / period->x);
        d.y -= period->y * std::round(d.y / period->y);
    }
    return d;
}

double cutoff_phi(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    const double s = 1.0 - x * x;
    return s * s;
}

double cutoff_phi_derivative(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return -4.0 * x * (1.0 - x * x);
}

namespace {

// Hermite blend on t in [0,1]: value -delta/2 -> -delta, slope -1 -> 0 (in r).
double theta_blend(double t, double delta) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    return -0.5 * delta * h00 - 0.5 * delta * h10 - delta * h01;
}

double smoothstep5(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

void require_delta(const GeometryParams& p) {
    if (!(p.delta > 0.0)) throw ConfigError("delta must be positive");
}

}  // namespace

double theta_profile(double r, double delta) {
    const double a = std::abs(r);
    double g;
    if (a <= 0.5 * delta)
        g = -a;
    else if (a >= delta)
        g = -delta;
    else
        g = theta_blend((a - 0.5 * delta) / (0.5 * delta), delta);
    return r >= 0.0 ? g : -g;
}

double theta_profile_derivative(double r, double delta) {
    const double a = std::abs(r);
    if (a <= 0.5 * delta) return -1.0;
    if (a >= delta) return 0.0;
    const double t = (a - 0.5 * delta) / (0.5 * delta);
    // dg/dt = delta/2 (3t + 1)(t - 1); the profile is odd so the derivative is even.
    return 0.5 * delta * (3 * t + 1) * (t - 1) * (2.0 / delta);
}

double zeta_profile(double r, double delta) { return 1.0 - smoothstep5((std::abs(r) - delta) / delta); }

double signed_distance(const AnalyticInterface& iface, Vec2 x, double t) {
    return iface.radius - norm(iface.offset(x, t));
}

Vec2 project(const AnalyticInterface& iface, Vec2 x, double t) {
    const Vec2 off = iface.offset(x, t);
    const double r = norm(off);
    if (r == 0.0) throw OutOfTubeError("projection undefined at the centre of the circle");
    return x - off + (iface.radius / r) * off;
}

NormalCurvature normal_and_curvature(const AnalyticInterface& iface, const GeometryParams& params, Vec2 x,
                                     double t) {
    require_delta(params);
    const Vec2 off = iface.offset(x, t);
    const double r = norm(off);
    const double d = iface.radius - r;
    if (std::abs(d) >= 3.0 * params.delta || r == 0.0)
        throw OutOfTubeError("query at distance " + std::to_string(d) + " outside the 3 delta tube");
    NormalCurvature out;
    out.normal = (-1.0 / r) * off;
    out.curvature = 1.0 / iface.radius;
    out.normal_velocity = dot(out.normal, iface.velocity);
    return out;
}

Vec2 xi_field(const AnalyticInterface& iface, const GeometryParams& params, Vec2 x, double t) {
    require_delta(params);
    const Vec2 off = iface.offset(x, t);
    const double r = norm(off);
    const double d = iface.radius - r;
    if (std::abs(d) >= params.delta || r == 0.0) return {};
    return (-cutoff_phi(d / params.delta) / r) * off;
}

double xi_divergence(const AnalyticInterface& iface, const GeometryParams& params, Vec2 x, double t) {
    require_delta(params);
    const double r = norm(iface.offset(x, t));
    const double d = iface.radius - r;
    if (std::abs(d) >= params.delta || r == 0.0) return 0.0;
    return cutoff_phi_derivative(d / params.delta) / params.delta - cutoff_phi(d / params.delta) / r;
}

double theta_weight(const AnalyticInterface& iface, const GeometryParams& params, Vec2 x, double t) {
    require_delta(params);
    return theta_profile(signed_distance(iface, x, t), params.delta);
}

Vec2 extended_curvature(const AnalyticInterface& iface, const GeometryParams& params, Vec2 x, double t) {
    require_delta(params);
    const Vec2 off = iface.offset(x, t);
    const double r = norm(off);
    const double d = iface.radius - r;
    if (std::abs(d) >= 2.0 * params.delta || r == 0.0) return {};
    const double z = zeta_profile(d, params.delta);
    return (-z / (iface.radius * r)) * off;
}

Vec2 extended_velocity(const AnalyticInterface& iface, const GeometryParams& params, const VelocityFunction& v,
                       Vec2 x, double t) {
    require_delta(params);
    const double d = signed_distance(iface, x, t);
    if (std::abs(d) >= 2.0 * params.delta)
        throw OutOfTubeError("velocity extension queried at distance " + std::to_string(d) +
                             " outside the 2 delta tube");
    return v(project(iface, x, t), t);
}

void require_margin(const AnalyticInterface& iface, const GeometryParams& params, double Lx, double Ly,
                    bool periodic, double t_begin, double t_end) {
    require_delta(params);
    const double reach = iface.radius + 3.0 * params.delta;
    if (periodic) {
        if (2.0 * reach >= std::min(Lx, Ly))
            throw ConfigError("interface plus 3 delta tube overlaps its periodic image");
        return;
    }
    // The centre moves linearly, so the wall distance is extremal at the ends.
    for (double t : {t_begin, t_end}) {
        const Vec2 c = iface.center_at(t);
        const double gap = std::min({c.x, Lx - c.x, c.y, Ly - c.y}) - iface.radius;
        if (gap <= 3.0 * params.delta)
            throw ConfigError("interface comes within 3 delta of the wall at t = " + std::to_string(t) +
                              " (gap " + std::to_string(gap) + ", delta " + std::to_string(params.delta) + ")");
    }
}

namespace {

constexpr int kGaussPoints = 10;

struct GaussRule {
    std::array<double, kGaussPoints> nodes;
    std::array<double, kGaussPoints> weights;
};

// Boost stores only the non-negative half of the symmetric rule.
GaussRule gauss_rule() {
    using Rule = boost::math::quadrature::gauss<double, kGaussPoints>;
    const auto& a = Rule::abscissa();
    const auto& w = Rule::weights();
    GaussRule g{};
    int k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        g.nodes[k] = a[i];
        g.weights[k++] = w[i];
        g.nodes[k] = -a[i];
        g.weights[k++] = w[i];
    }
    return g;
}

}  // namespace

double tubular_integral(const std::function<double(double r, Vec2 p)>& g, const AnalyticInterface& iface,
                        const GeometryParams& params, double half_width, JacobianMode mode,
                        TubularQuadrature quadrature, double t) {
    require_delta(params);
    if (iface.shape != Shape::circle) throw UnsupportedScenarioError("tubular quadrature supports circles only");
    if (!(half_width > 0.0) || half_width > 2.0 * params.delta * (1.0 + 1e-12))
        throw std::invalid_argument("tubular half-width must lie in (0, 2 delta]");
    if (quadrature.radial_panels < 1 || quadrature.angular_points < 3)
        throw std::invalid_argument("tubular quadrature needs at least one panel and three angles");

    static const GaussRule rule = gauss_rule();
    const double R = iface.radius;
    const Vec2 c = iface.center_at(t);
    const int na = quadrature.angular_points;
    const int np = quadrature.radial_panels;
    const double panel = 2.0 * half_width / np;
    const double dsigma = 2.0 * std::numbers::pi * R / na;

    double total = 0.0;
    for (int a = 0; a < na; ++a) {
        const double angle = 2.0 * std::numbers::pi * a / na;
        const Vec2 p = c + R * Vec2{std::cos(angle), std::sin(angle)};
        double line = 0.0;
        for (int k = 0; k < np; ++k) {
            const double mid = -half_width + (k + 0.5) * panel;
            for (int q = 0; q < kGaussPoints; ++q) {
                const double r = mid + 0.5 * panel * rule.nodes[q];
                const double jac = mode == JacobianMode::flat ? 1.0 : std::max(0.0, (R - r) / R);
                line += 0.5 * panel * rule.weights[q] * g(r, p) * jac;
            }
        }
        total += line * dsigma;
    }
    return total;
}

}  // namespace nsac::geometry
