#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "nsac/calculus.hpp"
#include "nsac/errors.hpp"
#include "nsac/log.hpp"
#include "nsac/potential.hpp"

using namespace nsac;

namespace {

std::vector<double> quartic_samples(int n) {
    std::vector<double> s(n);
    for (int k = 0; k < n; ++k) {
        const double c = -1.0 + 2.0 * k / (n - 1);
        s[k] = (1 - c * c) * (1 - c * c) / 8;
    }
    return s;
}

// independent quadrature oracle, 61-point Kronrod on [a, b]
template <class F>
double quad(F f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

}  // namespace

TEST(Potential, QuarticSurfaceTension) {
    const DoubleWell w = DoubleWell::quartic();
    EXPECT_NEAR(surface_tension_c0(w), 2.0 / 3.0, 1e-10);
    EXPECT_NEAR(w.f(0.0), 1.0 / 8.0, 1e-15);
    EXPECT_EQ(w.f(1.0), 0.0);
    EXPECT_EQ(w.df(-1.0), 0.0);
    EXPECT_NEAR(w.d2f(1.0), 1.0, 1e-15);
}

TEST(Potential, ScalingTheWellByFourDoublesTension) {
    EXPECT_NEAR(surface_tension_c0(DoubleWell::quartic(4.0)), 4.0 / 3.0, 1e-10);
}

TEST(Potential, HalfIntervalDoubledEqualsFullIntegral) {
    const DoubleWell w = DoubleWell::quartic();
    const double half = quad([&](double r) { return std::sqrt(2 * w.f(r)); }, -1.0, 0.0);
    EXPECT_NEAR(2 * half, surface_tension_c0(w), 1e-12);
}

TEST(Potential, TabulatedWellReproducesQuartic) {
    const DoubleWell t = DoubleWell::tabulated(quartic_samples(201));
    EXPECT_FALSE(t.is_quartic());
    EXPECT_NEAR(surface_tension_c0(t), 2.0 / 3.0, 1e-6);
    for (double c : {-0.7, 0.0, 0.35, 0.999})
        EXPECT_NEAR(t.f(c), DoubleWell::quartic().f(c), 1e-8) << c;
    EXPECT_EQ(t.samples().size(), 201u);
}

TEST(Potential, TabulatedWellValidation) {
    auto s = quartic_samples(21);
    s[3] += 0.01;
    EXPECT_THROW(DoubleWell::tabulated(s), ConfigError);  // not even
    auto ends = quartic_samples(21);
    ends.front() = ends.back() = 0.01;
    EXPECT_THROW(DoubleWell::tabulated(ends), ConfigError);
    auto neg = quartic_samples(21);
    neg[5] = neg[15] = -0.1;
    EXPECT_THROW(DoubleWell::tabulated(neg), ConfigError);
    EXPECT_THROW(DoubleWell::tabulated({0.0, 1.0, 0.0}), ConfigError);
}

TEST(Potential, DensityValidation) {
    EXPECT_THROW(DensityPair::make(0.0, 1.0), ConfigError);
    EXPECT_THROW(DensityPair::make(1.0, -2.0), ConfigError);
    const DensityPair d = DensityPair::make(2.0, 1.0);
    EXPECT_EQ(d.rho_hat(1.0), 2.0);
    EXPECT_EQ(d.rho_hat(-1.0), 1.0);
    EXPECT_EQ(d.rho_hat(0.0), 1.5);
}

TEST(Potential, PsiMapValuesForUnitDensity) {
    const PsiMap psi(DoubleWell::quartic(), DensityPair::make(1.0, 1.0));
    EXPECT_EQ(psi(-1.0), 0.0);
    EXPECT_NEAR(psi(1.0), 2.0 / 3.0, 1e-10);
    EXPECT_NEAR(psi(0.0), 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(psi.total(), 2.0 / 3.0, 1e-10);
    // closed form (c + 1)^2 (2 - c) / 6
    for (double c : {-0.8, -0.25, 0.4, 0.9}) EXPECT_NEAR(psi(c), (c + 1) * (c + 1) * (2 - c) / 6, 1e-10);
    double prev = -1.0;
    for (int k = 0; k <= 100; ++k) {
        const double v = psi(-1.0 + 0.02 * k);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(Potential, PsiMapWithUnequalDensitiesMatchesQuadrature) {
    const DoubleWell w = DoubleWell::quartic();
    const DensityPair d = DensityPair::make(2.0, 1.0);
    const PsiMap psi(w, d);
    auto integrand = [&](double r) { return std::sqrt(2 * d.rho_hat(r) * w.f(r)); };
    EXPECT_NEAR(psi.total(), quad(integrand, -1.0, 1.0), 1e-9);
    EXPECT_NEAR(psi(0.3), quad(integrand, -1.0, 0.3), 1e-9);
    EXPECT_NEAR(psi.derivative(0.3), integrand(0.3), 1e-12);
    EXPECT_EQ(psi.derivative(1.2), 0.0);
}

TEST(Potential, PsiMapClampsAndWarnsOnce) {
    const PsiMap psi(DoubleWell::quartic(), DensityPair::make(1.0, 1.0));
    const std::size_t before = warning_count();
    const LogLevel keep = log_level();
    set_log_level(LogLevel::quiet);
    EXPECT_EQ(psi(1.02), psi(1.0));
    EXPECT_EQ(warning_count(), before);
    EXPECT_EQ(psi(1.2), psi(1.0));
    EXPECT_EQ(psi(-1.3), 0.0);
    set_log_level(keep);
    EXPECT_EQ(warning_count(), before + 1);
}

TEST(Potential, OptimalProfile) {
    EXPECT_EQ(optimal_profile(0.0, 0.05), 0.0);
    EXPECT_NEAR(optimal_profile(10.0, 0.05), 1.0, 1e-15);
    EXPECT_NEAR(optimal_profile(0.1, 0.05), std::tanh(1.0), 1e-12);
    const DoubleWell w = DoubleWell::quartic();
    const DensityPair one = DensityPair::make(1.0, 1.0);
    EXPECT_NEAR(optimal_profile_rk4(0.1, 0.05, w, one), std::tanh(1.0), 1e-8);
    EXPECT_NEAR(optimal_profile_rk4(-0.1, 0.05, w, one), -std::tanh(1.0), 1e-8);
    const OptimalProfile prof(0.05, w, one);
    EXPECT_NEAR(prof(0.1), std::tanh(1.0), 1e-12);
}

TEST(Potential, OptimalProfileSatisfiesEquipartitionWithVariableDensity) {
    const DoubleWell w = DoubleWell::quartic();
    const DensityPair d = DensityPair::make(2.0, 1.0);
    const double eps = 0.05;
    const OptimalProfile prof(eps, w, d);
    for (double s : {-0.08, -0.02, 0.0, 0.03, 0.1}) {
        const double step = 1e-5;
        const double slope = (prof(s + step) - prof(s - step)) / (2 * step);
        const double c = prof(s);
        EXPECT_NEAR(eps * slope, std::sqrt(2 * d.rho_hat(c) * w.f(c)), 1e-6) << s;
        EXPECT_NEAR(prof(s), optimal_profile_rk4(s, eps, w, d), 1e-8);
    }
}

TEST(Potential, WellPreparedInitialData) {
    // at eps = 0.02 the corner cells lie 22 eps outside the circle
    const Grid2D g = Grid2D::make(256, 256, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    const auto iface = geometry::AnalyticInterface::circle({0.5, 0.5}, 0.25);
    const geometry::GeometryParams p{0.08};
    const DoubleWell w = DoubleWell::quartic();

    const InitialPhase uni = well_prepared_init(iface, p, g, 0.02, w, DensityPair::make(1.0, 1.0));
    EXPECT_EQ(uni.rho.min(), 1.0);
    EXPECT_EQ(uni.rho.max(), 1.0);
    EXPECT_NEAR(uni.c(0, 0), -1.0, 1e-8);
    EXPECT_NEAR(uni.c(128, 128), 1.0, 1e-4);

    const DensityPair d = DensityPair::make(2.0, 1.0);
    const InitialPhase two = well_prepared_init(iface, p, g, 0.02, w, d);
    EXPECT_GE(two.rho.min(), 1.0);
    EXPECT_LE(two.rho.max(), 2.0);
    EXPECT_NEAR(two.rho(0, 0), 1.0, 1e-8);
    for (std::size_t k = 0; k < two.c.size(); k += 97) EXPECT_NEAR(two.rho[k], d.rho_hat(two.c[k]), 1e-14);

    EXPECT_THROW(well_prepared_init(iface, geometry::GeometryParams{0.1}, g, 0.02, w, d), ConfigError);
}

TEST(Potential, EquipartitionDefectOfDiscreteProfileIsSecondOrder) {
    // 1D profile along x sampled on a periodic strip: eps |c'| vs sqrt(2 f)
    const double eps = 0.05;
    double prev = 0.0;
    for (int n : {64, 128, 256}) {
        const Grid2D g = Grid2D::make(n, 16, 1.0, 16.0 / n, BoundaryMode::periodic);
        const auto c = ScalarField::from_function(g, [&](double x, double) { return optimal_profile(x - 0.5, eps); });
        const VectorField gc = grad(c);
        double err = 0.0;
        for (int i = n / 4; i < 3 * n / 4; ++i) {
            const double f = DoubleWell::quartic().f(c(i, 0));
            err = std::max(err, std::abs(eps * gc.x(i, 0) - std::sqrt(2 * f)));
        }
        if (prev > 0.0) {
            EXPECT_GT(std::log2(prev / err), 1.9) << n;
        }
        prev = err;
    }
}
