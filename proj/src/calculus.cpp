#include "nsac/calculus.hpp"

#include <cmath>
#include <vector>

namespace nsac {
namespace {

enum class Ghost { quadratic, linear };

// Value of f at (i, j) where at most one index sits one cell outside the grid.
class Stencil {
public:
    Stencil(const ScalarField& f, WallCondition wall, Ghost ghost)
        : f_(f), wall_(wall), ghost_(ghost), nx_(f.grid().nx), ny_(f.grid().ny), periodic_(f.grid().periodic()) {}

    double operator()(int i, int j) const {
        if (i >= 0 && i < nx_ && j >= 0 && j < ny_) return f_(i, j);
        if (periodic_) return f_((i + nx_) % nx_, (j + ny_) % ny_);
        if (i < 0) return ghost(f_(0, j), f_(1, j));
        if (i >= nx_) return ghost(f_(nx_ - 1, j), f_(nx_ - 2, j));
        if (j < 0) return ghost(f_(i, 0), f_(i, 1));
        return ghost(f_(i, ny_ - 1), f_(i, ny_ - 2));
    }

private:
    double ghost(double u0, double u1) const {
        if (wall_.kind == WallCondition::Kind::zero_gradient) return u0;
        if (ghost_ == Ghost::linear) return 2.0 * wall_.value - u0;
        return 8.0 / 3.0 * wall_.value - 2.0 * u0 + u1 / 3.0;
    }

    const ScalarField& f_;
    WallCondition wall_;
    Ghost ghost_;
    int nx_, ny_;
    bool periodic_;
};

ScalarField five_point(const ScalarField& f, WallCondition wall, Ghost ghost) {
    const Grid2D& g = f.grid();
    const Stencil s(f, wall, ghost);
    const double inv_h2 = 1.0 / (g.h() * g.h());
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j) {
        const bool edge_j = j == 0 || j == g.ny - 1;
        for (int i = 0; i < g.nx; ++i) {
            const bool edge = edge_j || i == 0 || i == g.nx - 1;
            const double c = f(i, j);
            const double sum = edge ? s(i - 1, j) + s(i + 1, j) + s(i, j - 1) + s(i, j + 1)
                                    : f(i - 1, j) + f(i + 1, j) + f(i, j - 1) + f(i, j + 1);
            out(i, j) = (sum - 4.0 * c) * inv_h2;
        }
    }
    return out;
}

}  // namespace

VectorField grad(const ScalarField& f, WallCondition wall) {
    const Grid2D& g = f.grid();
    const Stencil s(f, wall, Ghost::quadratic);
    const double inv_2h = 0.5 / g.h();
    VectorField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            out.x(i, j) = (s(i + 1, j) - s(i - 1, j)) * inv_2h;
            out.y(i, j) = (s(i, j + 1) - s(i, j - 1)) * inv_2h;
        }
    return out;
}

ScalarField div(const VectorField& u, WallCondition wall) {
    const Grid2D& g = u.grid();
    const Stencil sx(u.x, wall, Ghost::quadratic);
    const Stencil sy(u.y, wall, Ghost::quadratic);
    const double inv_2h = 0.5 / g.h();
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = (sx(i + 1, j) - sx(i - 1, j) + sy(i, j + 1) - sy(i, j - 1)) * inv_2h;
    return out;
}

ScalarField laplacian(const ScalarField& f, WallCondition wall) { return five_point(f, wall, Ghost::quadratic); }

VectorField capillary_force(const ScalarField& c, double eps, WallCondition wall) {
    const ScalarField lap = laplacian(c, wall);
    VectorField force = grad(c, wall);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double s = -eps * lap[k];
        force.x[k] *= s;
        force.y[k] *= s;
    }
    return force;
}

double integrate(const ScalarField& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    return sum * f.grid().cell_area();
}

double l1(const ScalarField& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += std::abs(v);
    return sum * f.grid().cell_area();
}

double l2(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double inner(const ScalarField& f, const ScalarField& g) {
    require_same_grid(f.grid(), g.grid(), "inner");
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) sum += f[k] * g[k];
    return sum * f.grid().cell_area();
}

double inner(const VectorField& u, const VectorField& v) { return inner(u.x, v.x) + inner(u.y, v.y); }

double h1_seminorm(const ScalarField& u, WallCondition wall) {
    const VectorField gu = grad(u, wall);
    return std::sqrt(inner(gu, gu));
}

double h1_seminorm(const VectorField& u, WallCondition wall) {
    const double a = h1_seminorm(u.x, wall);
    const double b = h1_seminorm(u.y, wall);
    return std::sqrt(a * a + b * b);
}

namespace {

void fit(ScalarField& out, const Grid2D& g) {
    if (out.size() != g.size() || !(out.grid() == g)) out = ScalarField(g);
}

void fit(FaceField& out, const Grid2D& g) {
    if (!(out.grid == g) || out.ux.size() != static_cast<std::size_t>(g.nx + 1) * g.ny) out = FaceField(g);
}

void fit(VectorField& out, const Grid2D& g) {
    fit(out.x, g);
    fit(out.y, g);
}

}  // namespace

ScalarField compact_laplacian(const ScalarField& f, WallCondition wall) {
    ScalarField out;
    compact_laplacian_into(f, wall, out);
    return out;
}

void compact_laplacian_into(const ScalarField& f, WallCondition wall, ScalarField& out) {
    const Grid2D& g = f.grid();
    fit(out, g);
    const int nx = g.nx;
    const int ny = g.ny;
    const double inv_h2 = 1.0 / (g.h() * g.h());
    const Stencil s(f, wall, Ghost::linear);
    const double* a = f.data();
    double* o = out.data();
    for (int j = 0; j < ny; ++j) {
        const bool edge_row = j == 0 || j == ny - 1;
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        if (edge_row) {
            for (int i = 0; i < nx; ++i)
                o[row + i] = (s(i - 1, j) + s(i + 1, j) + s(i, j - 1) + s(i, j + 1) - 4.0 * a[row + i]) * inv_h2;
            continue;
        }
        o[row] = (s(-1, j) + a[row + 1] + a[row - nx] + a[row + nx] - 4.0 * a[row]) * inv_h2;
        for (int i = 1; i < nx - 1; ++i) {
            const std::size_t k = row + i;
            o[k] = (a[k - 1] + a[k + 1] + a[k - nx] + a[k + nx] - 4.0 * a[k]) * inv_h2;
        }
        const std::size_t k = row + nx - 1;
        o[k] = (a[k - 1] + s(nx, j) + a[k - nx] + a[k + nx] - 4.0 * a[k]) * inv_h2;
    }
}

double compact_dirichlet_energy(const ScalarField& f, WallCondition wall) {
    const Grid2D& g = f.grid();
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (i + 1 < g.nx || g.periodic()) {
                const double d = f((i + 1) % g.nx, j) - f(i, j);
                sum += 0.5 * d * d;
            }
            if (j + 1 < g.ny || g.periodic()) {
                const double d = f(i, (j + 1) % g.ny) - f(i, j);
                sum += 0.5 * d * d;
            }
        }
    if (!g.periodic() && wall.kind == WallCondition::Kind::value) {
        auto wall_term = [&](double u0) { return (u0 - wall.value) * (u0 - wall.value); };
        for (int j = 0; j < g.ny; ++j) sum += wall_term(f(0, j)) + wall_term(f(g.nx - 1, j));
        for (int i = 0; i < g.nx; ++i) sum += wall_term(f(i, 0)) + wall_term(f(i, g.ny - 1));
    }
    return sum;
}

FaceField face_gradient(const ScalarField& f, WallCondition wall) {
    FaceField out;
    face_gradient_into(f, wall, out);
    return out;
}

void face_gradient_into(const ScalarField& f, WallCondition wall, FaceField& out) {
    const Grid2D& g = f.grid();
    fit(out, g);
    const Stencil s(f, wall, Ghost::linear);
    const double inv_h = 1.0 / g.h();
    for (int j = 0; j < g.ny; ++j) {
        out.x_face(0, j) = (f(0, j) - s(-1, j)) * inv_h;
        for (int i = 1; i < g.nx; ++i) out.x_face(i, j) = (f(i, j) - f(i - 1, j)) * inv_h;
        out.x_face(g.nx, j) = (s(g.nx, j) - f(g.nx - 1, j)) * inv_h;
    }
    for (int i = 0; i < g.nx; ++i) out.y_face(i, 0) = (f(i, 0) - s(i, -1)) * inv_h;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out.y_face(i, j) = (f(i, j) - f(i, j - 1)) * inv_h;
    for (int i = 0; i < g.nx; ++i) out.y_face(i, g.ny) = (s(i, g.ny) - f(i, g.ny - 1)) * inv_h;
    if (g.periodic()) {
        for (int j = 0; j < g.ny; ++j) out.x_face(g.nx, j) = out.x_face(0, j);
        for (int i = 0; i < g.nx; ++i) out.y_face(i, g.ny) = out.y_face(i, 0);
    }
}

ScalarField face_divergence(const FaceField& u) {
    ScalarField out;
    face_divergence_into(u, out);
    return out;
}

void face_divergence_into(const FaceField& u, ScalarField& out) {
    const Grid2D& g = u.grid;
    fit(out, g);
    const double inv_h = 1.0 / g.h();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = (u.x_face(i + 1, j) - u.x_face(i, j) + u.y_face(i, j + 1) - u.y_face(i, j)) * inv_h;
}

FaceField face_average(const VectorField& v) {
    FaceField out;
    face_average_into(v, out);
    return out;
}

void face_average_into(const VectorField& v, FaceField& out) {
    const Grid2D& g = v.grid();
    fit(out, g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) out.x_face(i, j) = 0.5 * (v.x(i - 1, j) + v.x(i, j));
        const double edge = g.periodic() ? 0.5 * (v.x(g.nx - 1, j) + v.x(0, j)) : 0.0;
        out.x_face(0, j) = edge;
        out.x_face(g.nx, j) = edge;
    }
    for (int i = 0; i < g.nx; ++i) {
        const double edge = g.periodic() ? 0.5 * (v.y(i, g.ny - 1) + v.y(i, 0)) : 0.0;
        out.y_face(i, 0) = edge;
        out.y_face(i, g.ny) = edge;
    }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out.y_face(i, j) = 0.5 * (v.y(i, j - 1) + v.y(i, j));
}

FaceField face_average(const ScalarField& f) {
    FaceField out;
    face_average_into(f, out);
    return out;
}

void face_average_into(const ScalarField& f, FaceField& out) {
    const Grid2D& g = f.grid();
    fit(out, g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) out.x_face(i, j) = 0.5 * (f(i - 1, j) + f(i, j));
        if (g.periodic()) {
            out.x_face(0, j) = out.x_face(g.nx, j) = 0.5 * (f(g.nx - 1, j) + f(0, j));
        } else {
            out.x_face(0, j) = f(0, j);
            out.x_face(g.nx, j) = f(g.nx - 1, j);
        }
    }
    for (int i = 0; i < g.nx; ++i) {
        if (g.periodic()) {
            out.y_face(i, 0) = out.y_face(i, g.ny) = 0.5 * (f(i, g.ny - 1) + f(i, 0));
        } else {
            out.y_face(i, 0) = f(i, 0);
            out.y_face(i, g.ny) = f(i, g.ny - 1);
        }
    }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out.y_face(i, j) = 0.5 * (f(i, j - 1) + f(i, j));
}

VectorField cell_average(const FaceField& u) {
    VectorField out;
    cell_average_into(u, out);
    return out;
}

void cell_average_into(const FaceField& u, VectorField& out) {
    const Grid2D& g = u.grid;
    fit(out, g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            out.x(i, j) = 0.5 * (u.x_face(i, j) + u.x_face(i + 1, j));
            out.y(i, j) = 0.5 * (u.y_face(i, j) + u.y_face(i, j + 1));
        }
}

namespace {

template <class FaceValue>
void flux_divergence(const FaceField& u, const ScalarField& q, ScalarField& out, FaceValue face_value) {
    const Grid2D& g = u.grid;
    require_same_grid(g, q.grid(), "flux_divergence");
    fit(out, g);
    const int nx = g.nx;
    const int ny = g.ny;
    const bool periodic = g.periodic();
    // Wall faces have zero normal velocity and carry no flux.
    auto xflux = [&](int i, int j) {
        const double un = u.x_face(i, j);
        if (un == 0.0 || (!periodic && (i == 0 || i == nx))) return 0.0;
        const double ql = q(i == 0 ? nx - 1 : i - 1, j);
        const double qr = q(i == nx ? 0 : i, j);
        return un * face_value(un, ql, qr);
    };
    auto yflux = [&](int i, int j) {
        const double un = u.y_face(i, j);
        if (un == 0.0 || (!periodic && (j == 0 || j == ny))) return 0.0;
        const double ql = q(i, j == 0 ? ny - 1 : j - 1);
        const double qr = q(i, j == ny ? 0 : j);
        return un * face_value(un, ql, qr);
    };
    const double inv_h = 1.0 / g.h();
    std::vector<double> below(nx);
    for (int i = 0; i < nx; ++i) below[i] = yflux(i, 0);
    for (int j = 0; j < ny; ++j) {
        double left = xflux(0, j);
        for (int i = 0; i < nx; ++i) {
            const double right = xflux(i + 1, j);
            const double above = yflux(i, j + 1);
            out(i, j) = (right - left + above - below[i]) * inv_h;
            left = right;
            below[i] = above;
        }
    }
}

}  // namespace

ScalarField upwind_flux_divergence(const FaceField& u, const ScalarField& q) {
    ScalarField out;
    upwind_flux_divergence_into(u, q, out);
    return out;
}

void upwind_flux_divergence_into(const FaceField& u, const ScalarField& q, ScalarField& out) {
    flux_divergence(u, q, out, [](double un, double ql, double qr) { return un > 0.0 ? ql : qr; });
}

ScalarField central_flux_divergence(const FaceField& u, const ScalarField& q) {
    ScalarField out;
    central_flux_divergence_into(u, q, out);
    return out;
}

void central_flux_divergence_into(const FaceField& u, const ScalarField& q, ScalarField& out) {
    flux_divergence(u, q, out, [](double, double ql, double qr) { return 0.5 * (ql + qr); });
}

}  // namespace nsac
