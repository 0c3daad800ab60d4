#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <numbers>

#include "nsac/calculus.hpp"
#include "nsac/errors.hpp"
#include "nsac/solver.hpp"

using namespace nsac;
using std::numbers::pi;

namespace {

Grid2D strip(int n) { return Grid2D::make(n, 16, 1.0, 16.0 / n, BoundaryMode::periodic); }

// two planar fronts 0.25 either side of x = 0.5 + shift, phase + in between;
// a shift off the cell faces breaks the mirror symmetry of the grid
ScalarField planar(const Grid2D& g, double eps, double shift = 0.0) {
    return ScalarField::from_function(
        g, [&](double x, double) { return optimal_profile(0.25 - std::abs(x - 0.5 - shift), eps); });
}

// zero crossing of row 0 between x = 0.5 and x = 1 by linear interpolation
double right_front(const ScalarField& c) {
    const Grid2D& g = c.grid();
    for (int i = g.nx / 2; i + 1 < g.nx; ++i)
        if (c(i, 0) >= 0.0 && c(i + 1, 0) < 0.0) return g.x(i) + g.h() * c(i, 0) / (c(i, 0) - c(i + 1, 0));
    return NAN;
}

double bubble_area(const ScalarField& c) {
    double a = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) a += 0.5 * (1.0 + c[k]);
    return a * c.grid().cell_area();
}

SolverParams params(double eps) {
    SolverParams p;
    p.eps = eps;
    return p;
}

}  // namespace

TEST(ChemicalPotential, VanishesForPureAndCentralStates) {
    const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    const DoubleWell w = DoubleWell::quartic();
    const ScalarField rho = ScalarField::from_function(g, [](double x, double y) { return 1.0 + x * y; });
    EXPECT_EQ(chemical_potential(ScalarField(g, -1.0), rho, 0.1, w).max_abs(), 0.0);
    const Grid2D gp = Grid2D::make(32, 32, 1.0, 1.0, BoundaryMode::periodic);
    EXPECT_EQ(chemical_potential(ScalarField(gp, 0.0), ScalarField(gp, 1.0), 0.1, w).max_abs(), 0.0);
}

TEST(ChemicalPotential, PlanarProfileIsSecondOrder) {
    const double eps = 0.03;
    double prev = 0.0;
    for (int n : {128, 256, 512}) {
        const Grid2D g = strip(n);
        const ScalarField c = planar(g, eps);
        const ScalarField mu = chemical_potential(c, ScalarField(g, 1.0), eps, DoubleWell::quartic());
        // skip the cells near the kinks of |x - 0.5| where the two tails meet
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            if (std::abs(g.x(i) - 0.5) > 0.1 && std::abs(g.x(i) - 0.5) < 0.4) err = std::max(err, std::abs(mu(i, 0)));
        if (prev > 0.0) {
            EXPECT_GT(std::log2(prev / err), 1.8) << n;
        }
        prev = err;
    }
}

TEST(ChemicalPotential, RejectsNonPositiveDensity) {
    const Grid2D g = Grid2D::make(16, 16, 1.0, 1.0, BoundaryMode::periodic);
    ScalarField rho(g, 1.0);
    rho(3, 4) = 0.0;
    EXPECT_THROW(chemical_potential(ScalarField(g, 0.5), rho, 0.1, DoubleWell::quartic()), StateCorruptionError);
}

TEST(TransportDensity, RestAndConstantStates) {
    const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, BoundaryMode::periodic);
    const auto rho = ScalarField::from_function(g, [](double x, double y) { return 1.5 + std::sin(2 * pi * x) * y; });
    const ScalarField same = transport_density(rho, FaceField(g), 0.01);
    for (std::size_t k = 0; k < rho.size(); ++k) EXPECT_EQ(same[k], rho[k]);

    FaceField shear(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) shear.x_face(i, j) = std::sin(2 * pi * g.y(j));
    const ScalarField flat = transport_density(ScalarField(g, 2.0), shear, 0.01);
    EXPECT_LT(std::abs(flat.max() - 2.0) + std::abs(flat.min() - 2.0), 1e-14);
}

TEST(TransportDensity, FullTraversalConservesMassAndBounds) {
    const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, BoundaryMode::periodic);
    FaceField u(g);
    std::fill(u.ux.begin(), u.ux.end(), 1.0);
    ScalarField rho = ScalarField::from_function(g, [](double x, double y) {
        return std::hypot(x - 0.5, y - 0.5) < 0.25 ? 2.0 : 1.0;
    });
    const double mass = integrate(rho);
    const double dt = 0.5 * g.h();
    for (int s = 0; s < 2 * g.nx; ++s) {
        rho = transport_density(rho, u, dt);
        EXPECT_GE(rho.min(), 1.0 - 1e-14);
        EXPECT_LE(rho.max(), 2.0 + 1e-14);
    }
    EXPECT_NEAR(integrate(rho), mass, 1e-13);
}

TEST(TransportDensity, CflViolationAborts) {
    const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, BoundaryMode::periodic);
    FaceField u(g);
    std::fill(u.ux.begin(), u.ux.end(), 1.0);
    EXPECT_THROW(transport_density(ScalarField(g, 1.0), u, 2.0 * g.h()), CflViolationError);
}

TEST(AllenCahn, PureExteriorIsFixedPoint) {
    const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    const ScalarField c(g, -1.0);
    const ScalarField next = allen_cahn_step(c, ScalarField(g, 1.0), FaceField(g), params(0.125), 1e-3);
    EXPECT_EQ(next.max(), -1.0);
    EXPECT_EQ(next.min(), -1.0);
}

TEST(AllenCahn, PlanarFrontDoesNotDrift) {
    const double eps = 0.05;
    std::vector<double> drift;
    for (int n : {64, 128}) {
        const Grid2D g = strip(n);
        SolverParams p = params(eps);
        ScalarField c = planar(g, eps, 0.3 * g.h());
        const ScalarField rho(g, 1.0);
        const double x0 = right_front(c);
        const double dt = 1e-4;
        for (int s = 0; s < 1000; ++s) c = allen_cahn_step(c, rho, FaceField(g), p, dt);
        drift.push_back(std::abs(right_front(c) - x0) / (1000 * dt));
        EXPECT_LT(drift.back(), 2.0 * g.h() * g.h()) << n;
        std::printf("planar front drift n=%d: %.3e per unit time\n", n, drift.back());
    }
}

TEST(AllenCahn, BubbleShrinksMonotonically) {
    const Grid2D g = Grid2D::make(64, 64, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    const double eps = 0.0625;
    ScalarField c = ScalarField::from_function(
        g, [&](double x, double y) { return optimal_profile(0.25 - std::hypot(x - 0.5, y - 0.5), eps); });
    const ScalarField rho(g, 1.0);
    double area = bubble_area(c);
    for (int s = 0; s < 100; ++s) {
        c = allen_cahn_step(c, rho, FaceField(g), params(eps), 2e-4);
        const double next = bubble_area(c);
        EXPECT_LT(next, area) << "step " << s;
        area = next;
    }
}

TEST(SolverParams, Validation) {
    const Grid2D g = Grid2D::make(64, 64, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    SolverParams p = params(0.0625);
    EXPECT_NO_THROW(validate(p, g));
    p.theta = 2.0;
    try {
        validate(p, g);
        FAIL() << "theta = 2 accepted";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("-1/4 < theta <= 1"), std::string::npos);
    }
    EXPECT_NO_THROW(validate(p, g, true));
    p.theta = -0.25;
    EXPECT_THROW(validate(p, g), ConfigError);
    p.theta = 1.0;
    EXPECT_NO_THROW(validate(p, g));
    p.eps = 0.05;  // < 4h
    EXPECT_THROW(validate(p, g), ConfigError);
    EXPECT_NEAR(params(0.04).mobility(), 1.0, 0.0);
    SolverParams q = params(0.04);
    q.theta = 0.5;
    q.m0 = 3.0;
    EXPECT_NEAR(q.mobility(), 0.6, 1e-15);
}

TEST(NsacSolver, StableTimeStepRule) {
    const Grid2D g = Grid2D::make(64, 64, 1.0, 1.0, BoundaryMode::periodic);
    SolverParams p = params(0.0625);
    const NsacSolver solver(g, p);
    VectorField v(g, 2.0, 0.0);
    const SimState s = solver.initial_state(ScalarField(g, -1.0), ScalarField(g, 1.0), v);
    const double h = g.h();
    const double expected = std::min({0.4 * h / 2.0, 0.2 * 0.0625 * 0.0625, 0.4 * h * h});
    EXPECT_NEAR(solver.stable_time_step(s), expected, 1e-15);
    p.dt = 1e-5;
    EXPECT_EQ(NsacSolver(g, p).stable_time_step(s), 1e-5);
}

TEST(NsacSolver, QuiescentStateStaysQuiescent) {
    const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    const NsacSolver solver(g, params(0.125));
    SimState s = solver.initial_state(ScalarField(g, -1.0), ScalarField(g, 1.0));
    for (int k = 0; k < 20; ++k) {
        const StepLog log = solver.step(s);
        EXPECT_TRUE(log.clean) << log.violations;
    }
    EXPECT_EQ(s.v.max_norm(), 0.0);
    EXPECT_EQ(s.c.min(), -1.0);
    EXPECT_EQ(s.c.max(), -1.0);
    EXPECT_EQ(s.p.max_abs(), 0.0);
}

TEST(NsacSolver, PlanarInterfaceAtRestStaysAtRest) {
    std::vector<double> vmax;
    for (int n : {64, 128}) {
        const Grid2D g = strip(n);
        const NsacSolver solver(g, params(0.05));
        SimState s = solver.initial_state(planar(g, 0.05), ScalarField(g, 1.0));
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            solver.step(s);
            worst = std::max(worst, s.v.max_norm());
        }
        vmax.push_back(worst);
        EXPECT_LT(worst, g.h() * g.h()) << n;
    }
}

TEST(NsacSolver, TaylorGreenDecay) {
    // rho = 1, c = -1 (no capillary forcing), unit viscosity: amplitude decays as exp(-8 pi^2 t)
    std::vector<double> errors;
    for (int n : {32, 64}) {
        const Grid2D g = Grid2D::make(n, n, 1.0, 1.0, BoundaryMode::periodic);
        SolverParams p = params(8 * g.h());
        const NsacSolver solver(g, p);
        VectorField v(g);
        v.x = ScalarField::from_function(g, [](double x, double y) { return std::sin(2 * pi * x) * std::cos(2 * pi * y); });
        v.y = ScalarField::from_function(g, [](double x, double y) { return -std::cos(2 * pi * x) * std::sin(2 * pi * y); });
        SimState s = solver.initial_state(ScalarField(g, -1.0), ScalarField(g, 1.0), v);
        const double t_end = 0.01;
        const double dt = 1e-4;
        while (s.t < t_end - 1e-12) solver.step(s, dt);
        const double decay = std::exp(-8 * pi * pi * s.t);
        double err = 0.0;
        for (std::size_t k = 0; k < v.x.size(); ++k) err = std::max(err, std::abs(s.v.x[k] - decay * v.x[k]));
        errors.push_back(err);
        EXPECT_LT(err / decay, 0.05) << n;
        EXPECT_LT(face_divergence(s.faces).max_abs(), 1e-8);
    }
    EXPECT_LT(errors[1], errors[0]);
}

TEST(NsacSolver, TransportedVariableDensityBubbleConservesMass) {
    const Grid2D g = Grid2D::make(64, 64, 1.0, 1.0, BoundaryMode::periodic);
    const double eps = 0.0625;
    const NsacSolver solver(g, params(eps));
    const DensityPair d = DensityPair::make(2.0, 1.0);
    const auto c = ScalarField::from_function(
        g, [&](double x, double y) { return optimal_profile(0.2 - std::hypot(x - 0.5, y - 0.5), eps); });
    ScalarField rho(g);
    for (std::size_t k = 0; k < c.size(); ++k) rho[k] = d.rho_hat(c[k]);
    SimState s = solver.initial_state(c, rho, VectorField(g, 1.0, 0.5));
    const double mass = integrate(s.rho);
    const double lo = s.rho.min(), hi = s.rho.max();
    for (int k = 0; k < 50; ++k) {
        const StepLog log = solver.step(s);
        EXPECT_TRUE(log.clean) << log.violations;
        EXPECT_LE(log.divergence_l2, 1e-8);
        EXPECT_LE(log.max_abs_c, 1.05);
    }
    EXPECT_NEAR(integrate(s.rho), mass, 1e-12);
    EXPECT_GE(s.rho.min(), lo - 1e-12);
    EXPECT_LE(s.rho.max(), hi + 1e-12);
}

TEST(NsacSolver, StepsAreDeterministic) {
    const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    const double eps = 0.125;
    auto run = [&] {
        const NsacSolver solver(g, params(eps));
        const auto c = ScalarField::from_function(
            g, [&](double x, double y) { return optimal_profile(0.2 - std::hypot(x - 0.45, y - 0.5), eps); });
        SimState s = solver.initial_state(c, ScalarField(g, 1.0));
        for (int k = 0; k < 10; ++k) solver.step(s);
        return s;
    };
    const SimState a = run(), b = run();
    for (std::size_t k = 0; k < a.c.size(); ++k) {
        ASSERT_EQ(a.c[k], b.c[k]);
        ASSERT_EQ(a.v.x[k], b.v.x[k]);
        ASSERT_EQ(a.p[k], b.p[k]);
    }
}

TEST(Energies, PureStatesHaveNoEnergy) {
    const Grid2D g = Grid2D::make(32, 32, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    EXPECT_EQ(ginzburg_landau_energy(ScalarField(g, -1.0), ScalarField(g, 1.0), 0.1, DoubleWell::quartic()), 0.0);
    EXPECT_EQ(kinetic_energy(ScalarField(g, 2.0), VectorField(g)), 0.0);
    EXPECT_NEAR(kinetic_energy(ScalarField(g, 2.0), VectorField(g, 1.0, 1.0)), 2.0, 1e-13);
}
