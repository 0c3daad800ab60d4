#include "nsac/poisson.hpp"

#include <cmath>
#include <vector>

#include "nsac/calculus.hpp"
#include "nsac/errors.hpp"
#include "nsac/log.hpp"
#include "nsac/spectral.hpp"

namespace nsac {
namespace {

void remove_mean(ScalarField& f) {
    const double m = f.mean();
    for (double& v : f.values()) v -= m;
}

double raw_dot(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

WallCondition pressure_wall() { return WallCondition::neumann(); }

}  // namespace

CgResult conjugate_gradient(const LinearOperator& apply, const ScalarField& b, ScalarField& x,
                            std::span<const double> inverse_diagonal, double tolerance, int max_iterations,
                            bool project_mean) {
    require_same_grid(b.grid(), x.grid(), "conjugate_gradient");
    const Grid2D& g = b.grid();
    ScalarField r(g), z(g), p(g), ap(g);
    ScalarField rhs = b;
    if (project_mean) {
        remove_mean(rhs);
        remove_mean(x);
    }
    const double b_norm = std::sqrt(raw_dot(rhs, rhs));
    if (b_norm == 0.0) {
        for (double& v : x.values()) v = 0.0;
        return {0, 0.0};
    }
    apply(x, ap);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = rhs[k] - ap[k];
    if (project_mean) remove_mean(r);
    auto precondition = [&](const ScalarField& in, ScalarField& out) {
        for (std::size_t k = 0; k < in.size(); ++k) out[k] = inverse_diagonal[k] * in[k];
        if (project_mean) remove_mean(out);
    };
    precondition(r, z);
    p = z;
    double rz = raw_dot(r, z);
    double res = std::sqrt(raw_dot(r, r)) / b_norm;
    int it = 0;
    while (res > tolerance && it < max_iterations) {
        apply(p, ap);
        const double pap = raw_dot(p, ap);
        if (!(pap > 0.0)) break;
        const double alpha = rz / pap;
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        precondition(r, z);
        const double rz_new = raw_dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = z[k] + beta * p[k];
        res = std::sqrt(raw_dot(r, r)) / b_norm;
        ++it;
    }
    if (!(res <= tolerance)) throw SolverError("conjugate gradients did not converge", res);
    if (project_mean) remove_mean(x);
    return {it, res};
}

PoissonResult poisson_solve(const ScalarField& rhs, const PoissonOptions& options, SpectralSolver* spectral) {
    const Grid2D& g = rhs.grid();
    ScalarField b = rhs;
    remove_mean(b);
    const double b_norm = l2(b);
    PoissonResult result{ScalarField(g), 0.0, 0};
    if (b_norm == 0.0) return result;

    if (options.method == PoissonMethod::spectral) {
        if (spectral != nullptr && spectral->grid() == g && spectral->kind() == spectral_kind_for_pressure(g)) {
            result.solution = spectral->solve(b, 0.0, -1.0);
        } else {
            SpectralSolver solver(g, spectral_kind_for_pressure(g));
            result.solution = solver.solve(b, 0.0, -1.0);
        }
        result.iterations = 1;
    } else {
        // Positive definite form -Lap_h on the mean-free subspace.
        auto apply = [&](const ScalarField& in, ScalarField& out) {
            out = compact_laplacian(in, pressure_wall());
            for (double& v : out.values()) v = -v;
        };
        ScalarField neg_b = b;
        for (double& v : neg_b.values()) v = -v;
        const double h2 = g.h() * g.h();
        std::vector<double> inv_diag(g.size());
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                int neighbours = 4;
                if (!g.periodic()) {
                    neighbours -= (i == 0) + (i == g.nx - 1) + (j == 0) + (j == g.ny - 1);
                }
                inv_diag[g.index(i, j)] = h2 / neighbours;
            }
        const CgResult cg = conjugate_gradient(apply, neg_b, result.solution, inv_diag, options.tolerance * 0.5,
                                               options.max_iterations, true);
        result.iterations = cg.iterations;
    }
    remove_mean(result.solution);

    ScalarField residual = compact_laplacian(result.solution, pressure_wall());
    for (std::size_t k = 0; k < residual.size(); ++k) residual[k] -= b[k];
    result.relative_residual = l2(residual) / b_norm;
    if (!(result.relative_residual <= options.tolerance)) {
        log_warning("poisson_solve residual " + std::to_string(result.relative_residual) + " above tolerance");
        throw SolverError("poisson_solve exceeded tolerance", result.relative_residual);
    }
    return result;
}

}  // namespace nsac
