#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nsac {

enum class BoundaryMode { dirichlet_wall, periodic };

std::string to_string(BoundaryMode mode);
BoundaryMode boundary_mode_from_string(const std::string& name);

/// Uniform cell-centred grid on [0, Lx] x [0, Ly] with square cells.
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double Lx = 1.0;
    double Ly = 1.0;
    BoundaryMode bc = BoundaryMode::dirichlet_wall;

    /// Validates square cells and nx, ny >= 16; throws ConfigError otherwise.
    static Grid2D make(int nx, int ny, double Lx, double Ly, BoundaryMode bc);

    double h() const { return Lx / nx; }
    double cell_area() const { return h() * h(); }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    double x(int i) const { return (i + 0.5) * h(); }
    double y(int j) const { return (j + 0.5) * h(); }
    bool periodic() const { return bc == BoundaryMode::periodic; }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// Cell-centred scalar values stored row-major (x fastest).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid2D& grid, double value = 0.0)
        : grid_(grid), values_(grid.size(), value) {}

    const Grid2D& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }

    double min() const;
    double max() const;
    double max_abs() const;
    double mean() const;
    bool all_finite() const;

    template <class Fn>
    static ScalarField from_function(const Grid2D& grid, Fn&& fn) {
        ScalarField out(grid);
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) out(i, j) = fn(grid.x(i), grid.y(j));
        return out;
    }

private:
    Grid2D grid_;
    std::vector<double> values_;
};

struct VectorField {
    ScalarField x;
    ScalarField y;

    VectorField() = default;
    explicit VectorField(const Grid2D& grid, double vx = 0.0, double vy = 0.0) : x(grid, vx), y(grid, vy) {}
    VectorField(ScalarField fx, ScalarField fy);

    const Grid2D& grid() const { return x.grid(); }
    double max_norm() const;
};

/// Normal velocities on cell faces (MAC layout).  `ux` has (nx+1) x ny
/// entries, `uy` has nx x (ny+1).  On periodic grids the last face in each
/// direction duplicates the first.
struct FaceField {
    Grid2D grid;
    std::vector<double> ux;
    std::vector<double> uy;

    FaceField() = default;
    explicit FaceField(const Grid2D& g)
        : grid(g),
          ux(static_cast<std::size_t>(g.nx + 1) * g.ny, 0.0),
          uy(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0.0) {}

    double& x_face(int i, int j) { return ux[static_cast<std::size_t>(j) * (grid.nx + 1) + i]; }
    double x_face(int i, int j) const { return ux[static_cast<std::size_t>(j) * (grid.nx + 1) + i]; }
    double& y_face(int i, int j) { return uy[static_cast<std::size_t>(j) * grid.nx + i]; }
    double y_face(int i, int j) const { return uy[static_cast<std::size_t>(j) * grid.nx + i]; }

    double max_abs() const;
};

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where);

}  // namespace nsac
