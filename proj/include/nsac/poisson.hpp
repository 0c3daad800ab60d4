#pragma once

#include <functional>
#include <span>

#include "nsac/grid.hpp"
#include "nsac/spectral.hpp"

namespace nsac {

enum class PoissonMethod { spectral, conjugate_gradient };

struct PoissonOptions {
    double tolerance = 1e-10;
    int max_iterations = 50000;
    PoissonMethod method = PoissonMethod::spectral;
};

struct PoissonResult {
    ScalarField solution;
    double relative_residual = 0.0;
    int iterations = 0;
};

/// Solves Lap_h p = rhs for the pressure: periodic on periodic grids,
/// homogeneous Neumann on walled grids.  The mean of rhs is removed
/// (compatibility) and p is normalised to zero mean.  Throws SolverError if
/// ||Lap_h p - rhs|| / ||rhs|| exceeds the tolerance.  A matching
/// `spectral` solver may be passed in to reuse its transform plans.
PoissonResult poisson_solve(const ScalarField& rhs, const PoissonOptions& options = {},
                            SpectralSolver* spectral = nullptr);

struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;
};

using LinearOperator = std::function<void(const ScalarField& in, ScalarField& out)>;

/// Jacobi-preconditioned conjugate gradients for a symmetric positive
/// (semi-)definite stencil operator.  `x` holds the initial guess on entry.
/// With `project_mean` the iterates are kept orthogonal to constants, which
/// handles the singular Neumann/periodic Laplacian.  Throws SolverError on
/// non-convergence.
CgResult conjugate_gradient(const LinearOperator& apply, const ScalarField& b, ScalarField& x,
                            std::span<const double> inverse_diagonal, double tolerance, int max_iterations,
                            bool project_mean = false);

}  // namespace nsac
