#include "nsac/geometry_checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace nsac {

using geometry::AnalyticInterface;
using geometry::GeometryParams;
using geometry::Vec2;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFdStep = 1e-6;

struct Mat2 {
    double a11, a12, a21, a22;  // a_ij = d_j F_i
};

template <class F>
Mat2 jacobian(F&& f, Vec2 x) {
    const double s = kFdStep;
    const Vec2 dx = (1.0 / (2 * s)) * (f(x + Vec2{s, 0}) - f(x - Vec2{s, 0}));
    const Vec2 dy = (1.0 / (2 * s)) * (f(x + Vec2{0, s}) - f(x - Vec2{0, s}));
    return {dx.x, dy.x, dx.y, dy.y};
}

template <class F>
Vec2 gradient(F&& f, Vec2 x) {
    const double s = kFdStep;
    return {(f(x + Vec2{s, 0}) - f(x - Vec2{s, 0})) / (2 * s), (f(x + Vec2{0, s}) - f(x - Vec2{0, s})) / (2 * s)};
}

Vec2 apply(const Mat2& m, Vec2 v) { return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y}; }
Vec2 apply_transpose(const Mat2& m, Vec2 v) { return {m.a11 * v.x + m.a21 * v.y, m.a12 * v.x + m.a22 * v.y}; }

// Cell centres of an nx x ny grid with spacing h laid around the interface
// centre at time t (same relative layout as at t = 0).
template <class Fn>
void for_each_sample(const AnalyticInterface& iface, const Grid2D& grid, int refine, double t, Fn&& fn) {
    const int nx = grid.nx * refine;
    const int ny = grid.ny * refine;
    const double h = grid.h() / refine;
    const Vec2 shift = iface.center_at(t) - iface.center_at(0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) fn(Vec2{(i + 0.5) * h, (j + 0.5) * h} + shift);
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

CheckResult bounded(std::string name, double value, double bound, std::string detail = {}) {
    return {std::move(name), std::isfinite(value) && value <= bound, value, bound, std::move(detail)};
}

// Sup-based constant measured at two sample densities; passes when finite
// and the finer estimate is within 20% of the coarser one.
CheckResult refinement_stable(std::string name, double coarse, double fine) {
    const double change = coarse > 0.0 ? std::abs(fine / coarse - 1.0) : (fine == 0.0 ? 0.0 : 1.0);
    CheckResult r{std::move(name), std::isfinite(coarse) && std::isfinite(fine) && change <= 0.2, change, 0.2, {}};
    r.detail = "C(h) = " + fmt(coarse) + ", C(h/2) = " + fmt(fine);
    return r;
}

}  // namespace

std::vector<CheckResult> geometry_property_suite(const AnalyticInterface& iface_in, const GeometryParams& params,
                                                 const Grid2D& grid) {
    std::vector<CheckResult> out;
    const double delta = params.delta;
    AnalyticInterface iface = iface_in;
    iface.velocity = {};
    const double R = iface.radius;

    {
        // phi: bounds near 0, support, evenness, monotonicity on [0, 1]
        double worst = 0.0;
        double prev = geometry::cutoff_phi(0.0);
        for (int k = 0; k <= 4000; ++k) {
            const double x = -2.0 + 4.0 * k / 4000.0;
            const double p = geometry::cutoff_phi(x);
            worst = std::max(worst, std::abs(p - geometry::cutoff_phi(-x)));
            if (std::abs(x) <= 0.5) {
                worst = std::max(worst, (1.0 - 4 * x * x) - p);
                worst = std::max(worst, p - (1.0 - 0.5 * x * x));
            }
            if (std::abs(x) >= 1.0) worst = std::max(worst, std::abs(p));
            if (std::abs(x) < 1.0 && !(p > 0.0)) worst = std::max(worst, 1.0);
            if (x >= 0.0) {
                worst = std::max(worst, p - prev);
                prev = p;
            }
        }
        out.push_back(bounded("phi_profile", worst, 1e-15, "max violation of bounds/evenness/support/monotonicity"));
    }

    {
        // theta: odd, -r in the linear zone, saturated at +-delta, monotone,
        // c min(|d|,1) <= |theta| <= C min(|d|,1) with theta < 0 inside (the
        // blend is steeper than 1 in places, so C slightly exceeds 1)
        double worst = 0.0;
        double prev = geometry::theta_profile(-2 * delta, delta);
        for (int k = 0; k <= 4000; ++k) {
            const double r = -2 * delta + 4 * delta * k / 4000.0;
            const double th = geometry::theta_profile(r, delta);
            worst = std::max(worst, std::abs(th + geometry::theta_profile(-r, delta)));
            if (std::abs(r) <= delta / 2) worst = std::max(worst, std::abs(th + r));
            if (std::abs(r) >= delta) worst = std::max(worst, std::abs(th + std::copysign(delta, r)));
            worst = std::max(worst, th - prev);
            prev = th;
        }
        out.push_back(bounded("theta_profile", worst, 1e-15, "max violation of oddness/linear zone/saturation"));

        double c_low = std::numeric_limits<double>::infinity(), c_high = 0.0;
        bool signs = true;
        for_each_sample(iface, grid, 1, 0.0, [&](Vec2 x) {
            const double d = geometry::signed_distance(iface, x, 0.0);
            if (d == 0.0) return;
            const double th = geometry::theta_weight(iface, params, x, 0.0);
            const double m = std::min(std::abs(d), 1.0);
            c_low = std::min(c_low, std::abs(th) / m);
            c_high = std::max(c_high, std::abs(th) / m);
            if ((d > 0.0 && !(th < 0.0)) || (d < 0.0 && !(th > 0.0))) signs = false;
        });
        CheckResult r{"theta_coercivity", signs && c_low > 0.0 && std::isfinite(c_high), c_low, 0.0, {}};
        r.detail = "c = " + fmt(c_low) + ", C = " + fmt(c_high) + (signs ? "" : ", sign convention violated");
        out.push_back(r);
    }

    {
        double worst = 0.0;
        for (int k = 0; k <= 2000; ++k) {
            const double r = -3 * delta + 6 * delta * k / 2000.0;
            const double z = geometry::zeta_profile(r, delta);
            if (std::abs(r) <= delta) worst = std::max(worst, std::abs(z - 1.0));
            if (std::abs(r) >= 2 * delta) worst = std::max(worst, std::abs(z));
            if (z < 0.0 || z > 1.0) worst = std::max(worst, 1.0);
        }
        out.push_back(bounded("zeta_support", worst, 1e-15, "zeta = 1 on the delta tube, 0 beyond 2 delta"));
    }

    {
        // |xi| sandwich: 1 - 4 (d/delta)^2 <= |xi| (|d| <= delta/2) and
        // |xi| <= 1 - c min(d^2, 1) with c > 0
        double lower_violation = 0.0, c = std::numeric_limits<double>::infinity(), outside = 0.0;
        for_each_sample(iface, grid, 1, 0.0, [&](Vec2 x) {
            const double d = geometry::signed_distance(iface, x, 0.0);
            const double m = geometry::norm(geometry::xi_field(iface, params, x, 0.0));
            if (std::abs(d) <= delta / 2) lower_violation = std::max(lower_violation, 1.0 - 4 * (d / delta) * (d / delta) - m);
            if (std::abs(d) >= delta) outside = std::max(outside, m);
            if (d != 0.0) c = std::min(c, (1.0 - m) / std::min(d * d, 1.0));
        });
        CheckResult r{"xi_sandwich", lower_violation <= 1e-15 && outside == 0.0 && c > 0.0, c, 0.0, {}};
        r.detail = "c = " + fmt(c) + ", lower-bound violation " + fmt(lower_violation) + ", |xi| beyond delta " +
                   fmt(outside);
        out.push_back(r);
    }

    {
        // xi = n and div xi = -H on Gamma (exact evaluation)
        double xi_err = 0.0, div_err = 0.0;
        for (int k = 0; k < 720; ++k) {
            const double a = 2 * kPi * k / 720;
            const Vec2 p = iface.center + R * Vec2{std::cos(a), std::sin(a)};
            const auto nc = geometry::normal_and_curvature(iface, params, p, 0.0);
            xi_err = std::max(xi_err, geometry::norm(geometry::xi_field(iface, params, p, 0.0) - nc.normal));
            div_err = std::max(div_err, std::abs(geometry::xi_divergence(iface, params, p, 0.0) + nc.curvature));
        }
        out.push_back(bounded("xi_equals_normal_on_interface", xi_err, 1e-12));
        out.push_back(bounded("div_xi_equals_minus_H_on_interface", div_err, 1e-10));
    }

    {
        // Grid version: central-difference divergence of cell-sampled xi,
        // bilinearly interpolated to points of Gamma.  Expect O(h^2).
        auto discrete_error = [&](int refine) {
            const double h = grid.h() / refine;
            auto xi = [&](Vec2 x) { return geometry::xi_field(iface, params, x, 0.0); };
            auto div_at_cell = [&](double cx, double cy) {
                return (xi({cx + h, cy}).x - xi({cx - h, cy}).x + xi({cx, cy + h}).y - xi({cx, cy - h}).y) / (2 * h);
            };
            double err = 0.0;
            for (int k = 0; k < 360; ++k) {
                const double a = 2 * kPi * (k + 0.37) / 360;
                const Vec2 p = iface.center + R * Vec2{std::cos(a), std::sin(a)};
                const double fx = p.x / h - 0.5, fy = p.y / h - 0.5;
                const double i0 = std::floor(fx), j0 = std::floor(fy);
                const double sx = fx - i0, sy = fy - j0;
                auto cell = [&](double i, double j) { return div_at_cell((i + 0.5) * h, (j + 0.5) * h); };
                const double v = (1 - sx) * (1 - sy) * cell(i0, j0) + sx * (1 - sy) * cell(i0 + 1, j0) +
                                 (1 - sx) * sy * cell(i0, j0 + 1) + sx * sy * cell(i0 + 1, j0 + 1);
                err = std::max(err, std::abs(v + 1.0 / R));
            }
            return err;
        };
        const double e1 = discrete_error(1), e2 = discrete_error(2);
        const double order = std::log2(e1 / e2);
        CheckResult r{"div_xi_on_interface_grid_order", order >= 1.8, order, 1.8, {}};
        r.detail = "error " + fmt(e1) + " -> " + fmt(e2);
        out.push_back(r);
    }

    {
        // |H . xi + div xi| <= C |d| and (xi . grad) H = 0
        auto curvature_constant = [&](int refine) {
            double C = 0.0;
            for_each_sample(iface, grid, refine, 0.0, [&](Vec2 x) {
                const double d = geometry::signed_distance(iface, x, 0.0);
                if (d == 0.0 || std::abs(d) >= 2 * delta) return;
                const double lhs = dot(geometry::extended_curvature(iface, params, x, 0.0),
                                       geometry::xi_field(iface, params, x, 0.0)) +
                                   geometry::xi_divergence(iface, params, x, 0.0);
                C = std::max(C, std::abs(lhs) / std::min(std::abs(d), 1.0));
            });
            return C;
        };
        out.push_back(refinement_stable("curvature_consistency", curvature_constant(1), curvature_constant(2)));

        double worst = 0.0;
        const double s = grid.h();
        for_each_sample(iface, grid, 1, 0.0, [&](Vec2 x) {
            const Vec2 xi = geometry::xi_field(iface, params, x, 0.0);
            if (xi == Vec2{}) return;
            const Vec2 dH = (1.0 / (2 * s)) * (geometry::extended_curvature(iface, params, x + s * xi, 0.0) -
                                               geometry::extended_curvature(iface, params, x - s * xi, 0.0));
            worst = std::max(worst, geometry::norm(dH));
        });
        out.push_back(bounded("curvature_constant_along_xi", worst, s * s, "max |(xi . grad) H| against h^2"));
    }

    // Transport estimates on the translated circle.
    AnalyticInterface moving = iface;
    moving.velocity = (iface_in.velocity == Vec2{}) ? Vec2{1.0, 0.5} : iface_in.velocity;
    // Swirl that is constant along normals plus a normal part gamma d^2 n:
    // v . n = V . n on Gamma and v - v_ext = O(d^2), grad v - grad v_ext = O(d),
    // as assumed for the sharp-interface velocity.
    const double omega = 2.0, gamma = 10.0;
    const geometry::VelocityFunction fluid = [&](Vec2 x, double t) {
        const Vec2 r = x - moving.center_at(t);
        const double len = geometry::norm(r);
        const Vec2 unit = (1.0 / len) * r;
        const double d = R - len;
        return moving.velocity + omega * R * Vec2{-unit.y, unit.x} - gamma * d * d * unit;
    };
    const double times[] = {0.0, 0.05};
    const double tau = kFdStep;

    {
        double worst_d = 0.0, worst_v = 0.0;
        for (double t : times) {
            for_each_sample(moving, grid, 1, t, [&](Vec2 x) {
                const double d = geometry::signed_distance(moving, x, t);
                if (std::abs(d) >= delta || geometry::norm(moving.offset(x, t)) < 1e-9) return;
                const double dt_d =
                    (geometry::signed_distance(moving, x, t + tau) - geometry::signed_distance(moving, x, t - tau)) /
                    (2 * tau);
                const Vec2 vt = geometry::extended_velocity(moving, params, fluid, x, t);
                const Vec2 grad_d = gradient([&](Vec2 y) { return geometry::signed_distance(moving, y, t); }, x);
                worst_d = std::max(worst_d, std::abs(dt_d + dot(vt, grad_d)));
                const auto nc = geometry::normal_and_curvature(moving, params, x, t);
                worst_v = std::max(worst_v, std::abs(nc.normal_velocity + dt_d));
            });
        }
        out.push_back(bounded("distance_transport", worst_d, 1e-7, "max |d_t d + v_ext . grad d| in the delta tube"));
        out.push_back(bounded("normal_velocity", worst_v, 1e-7, "max |V_Gamma + d_t d|"));
    }

    auto transport_constants = [&](int refine) {
        double c_xi = 0.0, c_xn = 0.0, c_th = 0.0;
        for (double t : times) {
            for_each_sample(moving, grid, refine, t, [&](Vec2 x) {
                const double d = geometry::signed_distance(moving, x, t);
                if (std::abs(d) < grid.h() / (8 * refine) || std::abs(d) >= 2 * delta) return;
                auto xi = [&](Vec2 y, double s) { return geometry::xi_field(moving, params, y, s); };
                const Vec2 v = fluid(x, t);
                const Vec2 xi0 = xi(x, t);
                const Vec2 dt_xi = (1.0 / (2 * tau)) * (xi(x, t + tau) - xi(x, t - tau));
                const Mat2 grad_xi = jacobian([&](Vec2 y) { return xi(y, t); }, x);
                const Mat2 grad_v = jacobian([&](Vec2 y) { return fluid(y, t); }, x);
                const Vec2 material = dt_xi + apply(grad_xi, v);
                const Vec2 r1 = material + apply_transpose(grad_v, xi0);
                const double m = std::min(std::abs(d), 1.0);
                c_xi = std::max(c_xi, geometry::norm(r1) / m);
                c_xn = std::max(c_xn, std::abs(dot(xi0, material)) / (m * m));

                auto th = [&](Vec2 y, double s) { return geometry::theta_weight(moving, params, y, s); };
                const double dt_th = (th(x, t + tau) - th(x, t - tau)) / (2 * tau);
                const Vec2 grad_th = gradient([&](Vec2 y) { return th(y, t); }, x);
                c_th = std::max(c_th, std::abs(dt_th + dot(v, grad_th)) / m);
            });
        }
        return std::array<double, 3>{c_xi, c_xn, c_th};
    };
    const auto coarse = transport_constants(1);
    const auto fine = transport_constants(2);
    out.push_back(refinement_stable("xi_transport", coarse[0], fine[0]));
    out.push_back(refinement_stable("xi_normal_transport", coarse[1], fine[1]));
    out.push_back(refinement_stable("theta_transport", coarse[2], fine[2]));
    return out;
}

}  // namespace nsac
