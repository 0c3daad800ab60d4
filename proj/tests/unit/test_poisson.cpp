#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nsac/calculus.hpp"
#include "nsac/errors.hpp"
#include "nsac/poisson.hpp"
#include "nsac/spectral.hpp"

using namespace nsac;
using std::numbers::pi;

namespace {

double sup_error(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

ScalarField zero_mean(ScalarField f) {
    const double m = f.mean();
    for (std::size_t k = 0; k < f.size(); ++k) f[k] -= m;
    return f;
}

}  // namespace

TEST(Poisson, ZeroRightHandSideGivesZero) {
    for (BoundaryMode bc : {BoundaryMode::periodic, BoundaryMode::dirichlet_wall}) {
        const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, bc);
        const PoissonResult r = poisson_solve(ScalarField(g));
        EXPECT_EQ(r.solution.max_abs(), 0.0);
    }
}

TEST(Poisson, PeriodicManufacturedSolutionIsSecondOrder) {
    double prev = 0.0;
    for (int n : {32, 64, 128}) {
        const Grid2D g = Grid2D::make(n, n, 1.0, 1.0, BoundaryMode::periodic);
        const auto exact = ScalarField::from_function(
            g, [](double x, double y) { return std::sin(2 * pi * x) * std::cos(4 * pi * y); });
        auto rhs = exact;
        for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] *= -20 * pi * pi;
        const PoissonResult r = poisson_solve(rhs);
        EXPECT_LE(r.relative_residual, 1e-10);
        const double err = sup_error(r.solution, exact);
        if (prev > 0.0) {
            EXPECT_GT(std::log2(prev / err), 1.9) << "n=" << n;
        }
        prev = err;
    }
}

TEST(Poisson, NeumannManufacturedSolutionIsSecondOrder) {
    double prev = 0.0;
    for (int n : {32, 64, 128}) {
        const Grid2D g = Grid2D::make(n, n, 1.0, 1.0, BoundaryMode::dirichlet_wall);
        const auto exact = zero_mean(
            ScalarField::from_function(g, [](double x, double y) { return std::cos(pi * x) * std::cos(2 * pi * y); }));
        const auto rhs = ScalarField::from_function(
            g, [](double x, double y) { return -5 * pi * pi * std::cos(pi * x) * std::cos(2 * pi * y); });
        const PoissonResult r = poisson_solve(rhs);
        const double err = sup_error(r.solution, exact);
        if (prev > 0.0) {
            EXPECT_GT(std::log2(prev / err), 1.9) << "n=" << n;
        }
        prev = err;
    }
}

TEST(Poisson, DiscreteFourierModeIsInvertedExactly) {
    const int n = 64;
    const Grid2D g = Grid2D::make(n, n, 1.0, 1.0, BoundaryMode::periodic);
    const int kx = 3, ky = 5;
    const auto mode = ScalarField::from_function(
        g, [&](double x, double y) { return std::cos(2 * pi * kx * x) * std::cos(2 * pi * ky * y); });
    const double h = g.h();
    const double lambda = -(4 / (h * h)) * (std::pow(std::sin(pi * kx * h), 2) + std::pow(std::sin(pi * ky * h), 2));
    const PoissonResult r = poisson_solve(mode);
    double err = 0.0;
    for (std::size_t k = 0; k < mode.size(); ++k) err = std::max(err, std::abs(r.solution[k] - mode[k] / lambda));
    EXPECT_LT(err, 1e-12);
}

TEST(Poisson, SymbolMatchesClosedForm) {
    const double h = 1.0 / 32;
    EXPECT_NEAR(SpectralSolver::symbol(SpectralKind::periodic, 3, 32, h),
                -(4 / (h * h)) * std::pow(std::sin(pi * 3 / 32.0), 2), 1e-8);
    EXPECT_EQ(SpectralSolver::symbol(SpectralKind::periodic, 0, 32, h), 0.0);
    EXPECT_EQ(SpectralSolver::symbol(SpectralKind::neumann, 0, 32, h), 0.0);
    EXPECT_LT(SpectralSolver::symbol(SpectralKind::dirichlet, 0, 32, h), 0.0);
}

TEST(Poisson, ConjugateGradientAgreesWithSpectral) {
    const Grid2D g = Grid2D::make(48, 48, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    const auto rhs = ScalarField::from_function(
        g, [](double x, double y) { return std::exp(-40 * ((x - 0.3) * (x - 0.3) + (y - 0.6) * (y - 0.6))) - x; });
    const PoissonResult a = poisson_solve(rhs);
    const PoissonResult b =
        poisson_solve(rhs, PoissonOptions{1e-12, 50000, PoissonMethod::conjugate_gradient});
    EXPECT_GT(b.iterations, 0);
    EXPECT_LT(sup_error(a.solution, b.solution), 1e-8 * a.solution.max_abs());
    EXPECT_NEAR(a.solution.mean(), 0.0, 1e-13);
}

TEST(Poisson, ConjugateGradientReportsNonConvergence) {
    const Grid2D g = Grid2D::make(64, 64, 1.0, 1.0, BoundaryMode::periodic);
    // not an eigenvector, so two iterations cannot reach the tolerance
    const auto rhs = ScalarField::from_function(
        g, [](double x, double y) { return std::exp(-50 * ((x - 0.4) * (x - 0.4) + (y - 0.5) * (y - 0.5))); });
    EXPECT_THROW(poisson_solve(rhs, PoissonOptions{1e-14, 2, PoissonMethod::conjugate_gradient}), SolverError);
}

TEST(Spectral, HelmholtzSolveInvertsCompactOperator) {
    for (BoundaryMode bc : {BoundaryMode::periodic, BoundaryMode::dirichlet_wall}) {
        const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, bc);
        SpectralSolver solver(g, bc == BoundaryMode::periodic ? SpectralKind::periodic : SpectralKind::dirichlet);
        const auto u = ScalarField::from_function(g, [](double x, double y) { return x * y * (1 - x) + std::cos(y); });
        const double alpha = 2.0, beta = 0.3;
        const ScalarField lap = compact_laplacian(u, WallCondition::dirichlet(0.0));
        ScalarField rhs(g);
        for (std::size_t k = 0; k < u.size(); ++k) rhs[k] = alpha * u[k] - beta * lap[k];
        const ScalarField back = solver.solve(rhs, alpha, beta);
        EXPECT_LT(sup_error(back, u), 1e-11);
    }
}

TEST(Spectral, SolveIntoMayAliasInput) {
    const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    SpectralSolver solver(g, SpectralKind::neumann);
    auto rhs = ScalarField::from_function(g, [](double x, double y) { return std::cos(pi * x) + y - 0.5; });
    const ScalarField copy = solver.solve(rhs, 1.0, 1.0);
    solver.solve_into(rhs, 1.0, 1.0, rhs);
    EXPECT_EQ(sup_error(copy, rhs), 0.0);
}
