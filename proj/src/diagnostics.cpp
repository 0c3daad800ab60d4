#include "nsac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nsac/calculus.hpp"
#include "nsac/errors.hpp"

namespace nsac {
namespace {

const WallCondition kPhaseWall = WallCondition::dirichlet(-1.0);
const WallCondition kVelocityWall = WallCondition::dirichlet(0.0);

void require_context(const DiagnosticContext& ctx) {
    if (ctx.well == nullptr || ctx.psi == nullptr) throw std::invalid_argument("diagnostic context is incomplete");
}

// Pointwise quantities shared by the functionals.
struct Sample {
    double rho_eps, rho, wx, wy, chi;
    double gx, gy, gnorm;   // grad c
    double nx, ny;          // n_eps
    double psi, dpsi;       // psi(c), psi'(c)
    double f;
    double xix, xiy, div_xi, theta, d;
    double mu;
};

class Sampler {
public:
    Sampler(const SimState& sim, const SharpState& sharp, const GeometryFields& geo, const DiagnosticContext& ctx)
        : sim_(sim), sharp_(sharp), geo_(geo), ctx_(ctx), grad_c_(grad(sim.c, kPhaseWall)) {
        require_context(ctx);
        const Grid2D& g = sim.grid();
        require_same_grid(g, sharp.chi.grid(), "diagnostics");
        require_same_grid(g, geo.distance.grid(), "diagnostics");
        floor_ = 1e-8 / g.h();
    }

    Sample operator[](std::size_t k) const {
        Sample s;
        s.rho_eps = sim_.rho[k];
        s.rho = sharp_.rho[k];
        s.chi = sharp_.chi[k];
        s.wx = sim_.v.x[k] - sharp_.v.x[k];
        s.wy = sim_.v.y[k] - sharp_.v.y[k];
        s.gx = grad_c_.x[k];
        s.gy = grad_c_.y[k];
        s.gnorm = std::hypot(s.gx, s.gy);
        if (s.gnorm > floor_) {
            s.nx = s.gx / s.gnorm;
            s.ny = s.gy / s.gnorm;
        } else {
            s.nx = s.ny = 0.0;
        }
        const double c = sim_.c[k];
        s.psi = (*ctx_.psi)(c);
        s.dpsi = ctx_.psi->derivative(c);
        s.f = ctx_.well->f(c);
        s.xix = geo_.xi.x[k];
        s.xiy = geo_.xi.y[k];
        s.div_xi = geo_.div_xi[k];
        s.theta = geo_.theta[k];
        s.d = geo_.distance[k];
        s.mu = sim_.mu.size() == sim_.c.size() ? sim_.mu[k] : 0.0;
        return s;
    }

    std::size_t size() const { return sim_.c.size(); }
    double area() const { return sim_.grid().cell_area(); }

    template <class Fn>
    double integrate(Fn&& fn) const {
        double sum = 0.0;
        for (std::size_t k = 0; k < size(); ++k) sum += fn((*this)[k]);
        return sum * area();
    }

private:
    const SimState& sim_;
    const SharpState& sharp_;
    const GeometryFields& geo_;
    const DiagnosticContext& ctx_;
    VectorField grad_c_;
    double floor_ = 0.0;
};

double modulated_density(const Sample& s) {
    return 0.5 * (s.rho_eps - s.rho) * (s.rho_eps - s.rho) + 0.5 * s.rho_eps * (s.wx * s.wx + s.wy * s.wy);
}

double equipartition_gap(const Sample& s, double eps) {
    const double a = std::sqrt(eps) * s.gnorm - std::sqrt(2.0 * s.rho_eps * std::max(0.0, s.f) / eps);
    return a * a;
}

double tilt(const Sample& s) { return std::max(0.0, 1.0 - (s.nx * s.xix + s.ny * s.xiy)); }

double normal_gap2(const Sample& s) {
    const double ax = s.nx - s.xix;
    const double ay = s.ny - s.xiy;
    return ax * ax + ay * ay;
}

double relative_energy_impl(const Sampler& sm, double eps) {
    return sm.integrate([&](const Sample& s) {
        return modulated_density(s) + 0.5 * eps * s.gnorm * s.gnorm + s.rho_eps * s.f / eps -
               (s.xix * s.gx + s.xiy * s.gy) * s.dpsi;
    });
}

double bulk_error_impl(const Sampler& sm, double c0) {
    return sm.integrate([&](const Sample& s) { return std::abs(c0 * s.chi - s.psi) * std::abs(s.theta); });
}

double dirichlet_integral(const VectorField& w, WallCondition wall) {
    const double a = h1_seminorm(w, wall);
    return a * a;
}

// int grad v : (I - n n) |grad c|^2 = int (div v)|grad c|^2 - d_j v_i d_i c d_j c.
double stretching_term(const VectorField& v, const ScalarField& c) {
    const VectorField gvx = grad(v.x, kVelocityWall);
    const VectorField gvy = grad(v.y, kVelocityWall);
    const VectorField gc = grad(c, kPhaseWall);
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double cx = gc.x[k], cy = gc.y[k];
        const double divv = gvx.x[k] + gvy.y[k];
        const double contraction = gvx.x[k] * cx * cx + gvx.y[k] * cx * cy + gvy.x[k] * cy * cx + gvy.y[k] * cy * cy;
        sum += divv * (cx * cx + cy * cy) - contraction;
    }
    return sum * c.grid().cell_area();
}

}  // namespace

GeometryFields geometry_fields(const geometry::AnalyticInterface& iface, const geometry::GeometryParams& params,
                               const Grid2D& grid, double t) {
    GeometryFields g{ScalarField(grid), VectorField(grid), ScalarField(grid), ScalarField(grid)};
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const geometry::Vec2 x{grid.x(i), grid.y(j)};
            const double d = geometry::signed_distance(iface, x, t);
            g.distance(i, j) = d;
            const geometry::Vec2 xi = geometry::xi_field(iface, params, x, t);
            g.xi.x(i, j) = xi.x;
            g.xi.y(i, j) = xi.y;
            g.div_xi(i, j) = geometry::xi_divergence(iface, params, x, t);
            g.theta(i, j) = geometry::theta_profile(d, params.delta);
        }
    return g;
}

VectorField normal_field(const ScalarField& c) {
    VectorField n = grad(c, kPhaseWall);
    const double floor = 1e-8 / c.grid().h();
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double a = std::hypot(n.x[k], n.y[k]);
        if (a > floor) {
            n.x[k] /= a;
            n.y[k] /= a;
        } else {
            n.x[k] = n.y[k] = 0.0;
        }
    }
    return n;
}

double relative_energy(const SimState& sim, const SharpState& sharp, const GeometryFields& geo,
                       const DiagnosticContext& ctx) {
    return relative_energy_impl(Sampler(sim, sharp, geo, ctx), ctx.eps);
}

double relative_energy_rearranged(const SimState& sim, const SharpState& sharp, const GeometryFields& geo,
                                  const DiagnosticContext& ctx) {
    const Sampler sm(sim, sharp, geo, ctx);
    const double eps = ctx.eps;
    return sm.integrate([&](const Sample& s) {
        const double slaving = (std::sqrt(2.0 * s.rho_eps * std::max(0.0, s.f)) - s.dpsi) * s.gnorm;
        return modulated_density(s) + 0.5 * equipartition_gap(s, eps) + tilt(s) * s.dpsi * s.gnorm + slaving;
    });
}

double bulk_error(const SimState& sim, const SharpState& sharp, const GeometryFields& geo,
                  const DiagnosticContext& ctx) {
    return bulk_error_impl(Sampler(sim, sharp, geo, ctx), ctx.c0);
}

double l1_interface_error(const SimState& sim, const SharpState& sharp, const DiagnosticContext& ctx) {
    require_context(ctx);
    require_same_grid(sim.grid(), sharp.chi.grid(), "l1_interface_error");
    double sum = 0.0;
    for (std::size_t k = 0; k < sim.c.size(); ++k) sum += std::abs((*ctx.psi)(sim.c[k]) - ctx.c0 * sharp.chi[k]);
    return sum * sim.grid().cell_area();
}

double energy_identity_residual(const SimState& a, const SimState& b, double dt, const DiagnosticContext& ctx) {
    require_context(ctx);
    require_same_grid(a.grid(), b.grid(), "energy_identity_residual");
    if (!(dt > 0.0)) throw std::invalid_argument("energy identity needs dt > 0");
    return energy_identity_residual(ginzburg_landau_energy(a.c, a.rho, ctx.eps, *ctx.well), b, dt, ctx);
}

double energy_identity_residual(double gl_before, const SimState& b, double dt, const DiagnosticContext& ctx,
                                double* gl_after) {
    require_context(ctx);
    if (!(dt > 0.0)) throw std::invalid_argument("energy identity needs dt > 0");
    const double gl_b = ginzburg_landau_energy(b.c, b.rho, ctx.eps, *ctx.well);
    if (gl_after) *gl_after = gl_b;
    return (gl_b - gl_before) / dt + ctx.mobility * inner(b.mu, b.mu) - ctx.eps * stretching_term(b.v, b.c);
}

EnergyReport energy_report(const SimState& sim, const SharpState& sharp, const DiagnosticContext& ctx) {
    require_context(ctx);
    const Grid2D& g = sim.grid();
    const GeometryFields geo = geometry_fields(sharp.interface, ctx.geometry, g, sharp.t);
    const Sampler sm(sim, sharp, geo, ctx);
    const double eps = ctx.eps;

    EnergyReport r;
    r.t = sim.t;
    r.E = relative_energy_impl(sm, eps);
    r.E_rearranged = relative_energy_rearranged(sim, sharp, geo, ctx);
    r.E_vol = bulk_error_impl(sm, ctx.c0);
    r.equip = sm.integrate([&](const Sample& s) { return equipartition_gap(s, eps); });
    r.interface_err = sm.integrate([&](const Sample& s) { return tilt(s) * s.dpsi * s.gnorm; });

    auto d2 = [](const Sample& s) { return std::min(s.d * s.d, 1.0); };
    r.coercivity_lhs[0] = sm.integrate([&](const Sample& s) {
        return 2.0 * modulated_density(s) + equipartition_gap(s, eps);
    });
    r.coercivity_lhs[1] = sm.integrate([&](const Sample& s) {
        return d2(s) * (0.5 * eps * s.gnorm * s.gnorm + s.rho_eps * s.f / eps);
    });
    r.coercivity_lhs[2] = sm.integrate([&](const Sample& s) {
        const double gpsi = s.dpsi * s.gnorm;
        return (tilt(s) + normal_gap2(s) + d2(s)) * gpsi;
    });
    r.coercivity_lhs[3] = sm.integrate([&](const Sample& s) {
        return (normal_gap2(s) + d2(s)) * eps * s.gnorm * s.gnorm;
    });
    r.coercivity_lhs[4] = sm.integrate([&](const Sample& s) {
        const double weight = std::min(std::abs(s.d), 1.0) + std::sqrt(tilt(s));
        return weight * std::abs(eps * s.gnorm * s.gnorm - s.dpsi * s.gnorm);
    });
    r.coercivity_degenerate = !(r.E >= 1e-14);
    for (int i = 0; i < kCoercivityTerms; ++i)
        r.coercivity_ratio[i] = r.coercivity_degenerate ? 0.0 : r.coercivity_lhs[i] / r.E;

    VectorField w = sim.v;
    for (std::size_t k = 0; k < w.x.size(); ++k) {
        w.x[k] -= sharp.v.x[k];
        w.y[k] -= sharp.v.y[k];
    }
    r.diss_gradw = dirichlet_integral(w, kVelocityWall);
    r.diss_mu = inner(sim.mu, sim.mu);
    r.diss_xi = sm.integrate([&](const Sample& s) {
        const double a = s.div_xi * std::sqrt(2.0 * std::max(0.0, s.f) / s.rho_eps) + s.mu;
        return 0.5 * a * a;
    });
    r.diss_theta = sm.integrate([&](const Sample& s) {
        const double a = 0.5 * s.mu + s.theta / s.rho_eps * s.gnorm;
        return eps * a * a;
    });
    r.l1_psi = sm.integrate([&](const Sample& s) { return std::abs(s.psi - ctx.c0 * s.chi); });
    r.identity_residual = std::numeric_limits<double>::quiet_NaN();
    r.ginzburg_landau = ginzburg_landau_energy(sim.c, sim.rho, eps, *ctx.well);
    r.kinetic = kinetic_energy(sim.rho, sim.v);
    r.max_abs_c = sim.c.max_abs();

    // Measured constants of the auxiliary estimates.
    const double total = r.E + r.E_vol;
    const double coupling = sm.integrate([&](const Sample& s) {
        return std::abs(ctx.c0 * s.chi - s.psi) * std::hypot(s.wx, s.wy);
    });
    auto coupling_constant = [&](double eta) {
        const double excess = std::max(0.0, coupling - eta * r.diss_gradw);
        if (excess == 0.0) return 0.0;
        return total > 1e-14 ? eta * excess / total : std::numeric_limits<double>::infinity();
    };
    r.coupling_c_eta01 = coupling_constant(0.1);
    r.coupling_c_eta1 = coupling_constant(1.0);

    const VectorField gvx = grad(sharp.v.x, kVelocityWall);
    const VectorField gvy = grad(sharp.v.y, kVelocityWall);
    double tangential = 0.0;
    for (std::size_t k = 0; k < sm.size(); ++k) {
        const Sample s = sm[k];
        const double stress = eps * s.gnorm * s.gnorm - s.dpsi * s.gnorm;
        const double trace = gvx.x[k] + gvy.y[k];
        const double nn = gvx.x[k] * s.nx * s.nx + gvx.y[k] * s.nx * s.ny + gvy.x[k] * s.ny * s.nx +
                          gvy.y[k] * s.ny * s.ny;
        tangential += (trace - nn) * stress;
    }
    tangential = std::abs(tangential * sm.area());
    r.tangential_c =
        tangential == 0.0 ? 0.0 : (r.E > 1e-14 ? tangential / r.E : std::numeric_limits<double>::infinity());

    r.tubular_lhs_grid = sm.integrate([&](const Sample& s) {
        return 0.5 * s.div_xi * s.div_xi * 2.0 * std::max(0.0, s.f) / s.rho_eps;
    });
    if (sharp.type != ScenarioType::quiescent) {
        // 2 f(c) / rho_eps is smooth; interpolate it and take div xi exactly.
        ScalarField weight(g);
        for (std::size_t k = 0; k < weight.size(); ++k)
            weight[k] = 2.0 * std::max(0.0, ctx.well->f(sim.c[k])) / sim.rho[k];
        const geometry::AnalyticInterface& iface = sharp.interface;
        const geometry::Vec2 centre = iface.center_at(sharp.t);
        auto integrand = [&](double rr, geometry::Vec2 p) {
            const geometry::Vec2 x = p + (-rr / iface.radius) * (p - centre);
            const double dx = geometry::xi_divergence(iface, ctx.geometry, x, sharp.t);
            return 0.5 * dx * dx * sample_bilinear(weight, x);
        };
        r.tubular_lhs_quadrature = geometry::tubular_integral(integrand, iface, ctx.geometry, ctx.geometry.delta,
                                                              geometry::JacobianMode::curved, {}, sharp.t);
    }
    r.tubular_c = r.tubular_lhs_quadrature / (std::cbrt(eps) + r.E);
    return r;
}

std::vector<std::string> energy_report_columns() {
    std::vector<std::string> cols = {"t", "E", "E_rearranged", "E_vol", "equip", "interface_err"};
    for (const char* n : kCoercivityNames) cols.push_back(std::string("coercivity_lhs_") + n);
    for (const char* n : kCoercivityNames) cols.push_back(std::string("coercivity_ratio_") + n);
    for (const char* n : {"coercivity_degenerate", "diss_gradw", "diss_mu", "diss_xi", "diss_theta", "l1_psi",
                          "identity_residual", "ginzburg_landau", "kinetic", "max_abs_c", "coupling_c_eta01",
                          "coupling_c_eta1", "tangential_c", "tubular_lhs_grid", "tubular_lhs_quadrature",
                          "tubular_c"})
        cols.emplace_back(n);
    return cols;
}

std::vector<double> energy_report_values(const EnergyReport& r) {
    std::vector<double> v = {r.t, r.E, r.E_rearranged, r.E_vol, r.equip, r.interface_err};
    v.insert(v.end(), r.coercivity_lhs.begin(), r.coercivity_lhs.end());
    v.insert(v.end(), r.coercivity_ratio.begin(), r.coercivity_ratio.end());
    v.insert(v.end(), {r.coercivity_degenerate ? 1.0 : 0.0, r.diss_gradw, r.diss_mu, r.diss_xi, r.diss_theta,
                       r.l1_psi, r.identity_residual, r.ginzburg_landau, r.kinetic, r.max_abs_c,
                       r.coupling_c_eta01, r.coupling_c_eta1, r.tangential_c, r.tubular_lhs_grid,
                       r.tubular_lhs_quadrature, r.tubular_c});
    return v;
}

GronwallFit gronwall_monitor(const std::vector<double>& t, const std::vector<double>& series, double eps) {
    if (t.size() != series.size()) throw std::invalid_argument("gronwall_monitor: length mismatch");
    if (t.size() < 10) throw std::invalid_argument("gronwall_monitor needs at least 10 samples");
    GronwallFit fit;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(series[i]) || series[i] < -1e-10 || !std::isfinite(t[i]) || t[i] < t[0]) {
            fit.note = "series contains non-finite, negative or out-of-order samples";
            fit.C = std::numeric_limits<double>::infinity();
            return fit;
        }
    }
    const double s0 = series[0];
    const double forcing = std::cbrt(eps);
    auto fits = [&](double C) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double dt = t[i] - t[0];
            if (series[i] > std::exp(C * dt) * (s0 + C * dt * forcing) * (1.0 + 1e-12) + 1e-300) return false;
        }
        return true;
    };
    if (fits(0.0)) {
        fit.C = 0.0;
        fit.admissible = true;
        return fit;
    }
    double hi = 1.0;
    while (!fits(hi)) {
        hi *= 2.0;
        if (hi > 1e8) {
            fit.C = std::numeric_limits<double>::infinity();
            fit.note = "no finite constant below 1e8 fits the series";
            return fit;
        }
    }
    double lo = 0.0;
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        (fits(mid) ? hi : lo) = mid;
    }
    fit.C = hi;
    fit.admissible = true;
    return fit;
}

double gronwall_spread(const std::vector<double>& constants) {
    if (constants.empty()) return 0.0;
    const double mean = std::accumulate(constants.begin(), constants.end(), 0.0) / constants.size();
    if (mean == 0.0) return 0.0;
    if (!std::isfinite(mean)) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (double c : constants) worst = std::max(worst, std::abs(c - mean) / mean);
    return worst;
}

double sample_bilinear(const ScalarField& f, geometry::Vec2 x) {
    const Grid2D& g = f.grid();
    const double h = g.h();
    double fx = x.x / h - 0.5;
    double fy = x.y / h - 0.5;
    auto idx = [&](int i, int n) {
        if (g.periodic()) return ((i % n) + n) % n;
        return std::clamp(i, 0, n - 1);
    };
    if (!g.periodic()) {
        fx = std::clamp(fx, 0.0, g.nx - 1.0);
        fy = std::clamp(fy, 0.0, g.ny - 1.0);
    }
    const int i0 = static_cast<int>(std::floor(fx));
    const int j0 = static_cast<int>(std::floor(fy));
    const double a = fx - i0;
    const double b = fy - j0;
    const int i1 = idx(i0 + 1, g.nx), j1 = idx(j0 + 1, g.ny);
    const int ii = idx(i0, g.nx), jj = idx(j0, g.ny);
    return (1 - a) * (1 - b) * f(ii, jj) + a * (1 - b) * f(i1, jj) + (1 - a) * b * f(ii, j1) + a * b * f(i1, j1);
}

}  // namespace nsac
