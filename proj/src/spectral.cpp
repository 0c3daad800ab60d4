#include "nsac/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "nsac/errors.hpp"

namespace nsac {
namespace {

// The FFTW planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Kinds {
    fftw_r2r_kind forward;
    fftw_r2r_kind backward;
    double norm_per_dim_factor;  // n or 2n multiplier
};

Kinds kinds_for(SpectralKind kind) {
    switch (kind) {
        case SpectralKind::periodic: return {FFTW_R2HC, FFTW_HC2R, 1.0};
        case SpectralKind::neumann: return {FFTW_REDFT10, FFTW_REDFT01, 2.0};
        case SpectralKind::dirichlet: return {FFTW_RODFT10, FFTW_RODFT01, 2.0};
    }
    return {FFTW_R2HC, FFTW_HC2R, 1.0};
}

}  // namespace

struct SpectralSolver::Impl {
    Grid2D grid;
    SpectralKind kind;
    double* buffer = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<double> lx, ly;
    double normalisation = 1.0;

    Impl(const Grid2D& g, SpectralKind k) : grid(g), kind(k) {
        const Kinds kk = kinds_for(k);
        buffer = static_cast<double*>(fftw_malloc(sizeof(double) * g.size()));
        if (buffer == nullptr) throw Error("fftw_malloc failed");
        {
            std::lock_guard lock(planner_mutex());
            forward = fftw_plan_r2r_2d(g.ny, g.nx, buffer, buffer, kk.forward, kk.forward, FFTW_ESTIMATE);
            backward = fftw_plan_r2r_2d(g.ny, g.nx, buffer, buffer, kk.backward, kk.backward, FFTW_ESTIMATE);
        }
        if (forward == nullptr || backward == nullptr) throw Error("FFTW plan creation failed");
        const double h = g.h();
        lx.resize(g.nx);
        ly.resize(g.ny);
        for (int i = 0; i < g.nx; ++i) lx[i] = SpectralSolver::symbol(k, i, g.nx, h);
        for (int j = 0; j < g.ny; ++j) ly[j] = SpectralSolver::symbol(k, j, g.ny, h);
        normalisation = (kk.norm_per_dim_factor * g.nx) * (kk.norm_per_dim_factor * g.ny);
    }

    ~Impl() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        fftw_free(buffer);
    }
};

SpectralSolver::SpectralSolver(const Grid2D& grid, SpectralKind kind) : impl_(std::make_unique<Impl>(grid, kind)) {}
SpectralSolver::~SpectralSolver() = default;
SpectralSolver::SpectralSolver(SpectralSolver&&) noexcept = default;
SpectralSolver& SpectralSolver::operator=(SpectralSolver&&) noexcept = default;

const Grid2D& SpectralSolver::grid() const { return impl_->grid; }
SpectralKind SpectralSolver::kind() const { return impl_->kind; }

double SpectralSolver::symbol(SpectralKind kind, int k, int n, double h) {
    using std::numbers::pi;
    double angle = 0.0;
    switch (kind) {
        case SpectralKind::periodic: angle = 2.0 * pi * std::min(k, n - k) / n; break;
        case SpectralKind::neumann: angle = pi * k / n; break;
        case SpectralKind::dirichlet: angle = pi * (k + 1) / n; break;
    }
    return (2.0 * std::cos(angle) - 2.0) / (h * h);
}

ScalarField SpectralSolver::solve(const ScalarField& rhs, double alpha, double beta) {
    ScalarField out(impl_->grid);
    solve_into(rhs, alpha, beta, out);
    return out;
}

void SpectralSolver::solve_into(const ScalarField& rhs, double alpha, double beta, ScalarField& out) {
    Impl& s = *impl_;
    require_same_grid(s.grid, rhs.grid(), "SpectralSolver::solve");
    const int nx = s.grid.nx;
    const int ny = s.grid.ny;
    std::copy(rhs.data(), rhs.data() + rhs.size(), s.buffer);
    fftw_execute(s.forward);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double eig = alpha - beta * (s.lx[i] + s.ly[j]);
            double& mode = s.buffer[static_cast<std::size_t>(j) * nx + i];
            mode = eig == 0.0 ? 0.0 : mode / (eig * s.normalisation);
        }
    fftw_execute(s.backward);
    if (out.size() != s.grid.size() || !(out.grid() == s.grid)) out = ScalarField(s.grid);
    std::copy(s.buffer, s.buffer + out.size(), out.data());
}

SpectralKind spectral_kind_for_pressure(const Grid2D& grid) {
    return grid.periodic() ? SpectralKind::periodic : SpectralKind::neumann;
}

SpectralKind spectral_kind_for_velocity(const Grid2D& grid) {
    return grid.periodic() ? SpectralKind::periodic : SpectralKind::dirichlet;
}

}  // namespace nsac
