#include "nsac/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsac/errors.hpp"

namespace nsac {

std::string to_string(BoundaryMode mode) {
    return mode == BoundaryMode::periodic ? "periodic" : "dirichlet_wall";
}

BoundaryMode boundary_mode_from_string(const std::string& name) {
    if (name == "periodic") return BoundaryMode::periodic;
    if (name == "dirichlet_wall") return BoundaryMode::dirichlet_wall;
    throw ConfigError("unknown boundary mode '" + name + "' (expected dirichlet_wall or periodic)");
}

Grid2D Grid2D::make(int nx, int ny, double Lx, double Ly, BoundaryMode bc) {
    if (nx < 16 || ny < 16) throw ConfigError("grid needs at least 16 cells per direction");
    if (!(Lx > 0.0) || !(Ly > 0.0)) throw ConfigError("domain lengths must be positive");
    const double hx = Lx / nx;
    const double hy = Ly / ny;
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy))
        throw ConfigError("grid cells must be square (Lx/nx == Ly/ny)");
    return Grid2D{nx, ny, Lx, Ly, bc};
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

VectorField::VectorField(ScalarField fx, ScalarField fy) : x(std::move(fx)), y(std::move(fy)) {
    require_same_grid(x.grid(), y.grid(), "VectorField");
}

double VectorField::max_norm() const {
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::hypot(x[k], y[k]));
    return m;
}

double FaceField::max_abs() const {
    double m = 0.0;
    for (double v : ux) m = std::max(m, std::abs(v));
    for (double v : uy) m = std::max(m, std::abs(v));
    return m;
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where) {
    if (!(a == b)) throw GridMismatchError(std::string("grid mismatch in ") + where);
}

}  // namespace nsac
