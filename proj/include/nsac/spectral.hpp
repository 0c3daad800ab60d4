#pragma once

#include <memory>

#include "nsac/grid.hpp"

namespace nsac {

/// Which compact 5-point Laplacian the transform diagonalises.
///  periodic  : wrap-around (real DFT, half-complex)
///  neumann   : cell-centred zero-gradient walls (DCT-II / DCT-III)
///  dirichlet : cell-centred zero-value walls with linear ghost (DST-II / DST-III)
enum class SpectralKind { periodic, neumann, dirichlet };

/// Direct solver for (alpha - beta Lap_h) u = rhs with constant alpha, beta.
/// When alpha == 0 and the operator is singular (periodic or neumann) the
/// constant mode of rhs is discarded and the zero-mean solution returned.
/// Plans use FFTW_ESTIMATE so results are reproducible run to run.
/// An instance owns scratch buffers: use one per thread.
class SpectralSolver {
public:
    SpectralSolver(const Grid2D& grid, SpectralKind kind);
    ~SpectralSolver();
    SpectralSolver(SpectralSolver&&) noexcept;
    SpectralSolver& operator=(SpectralSolver&&) noexcept;
    SpectralSolver(const SpectralSolver&) = delete;
    SpectralSolver& operator=(const SpectralSolver&) = delete;

    ScalarField solve(const ScalarField& rhs, double alpha, double beta);
    /// As solve; `out` may alias `rhs`.
    void solve_into(const ScalarField& rhs, double alpha, double beta, ScalarField& out);

    const Grid2D& grid() const;
    SpectralKind kind() const;

    /// Symbol of the 1D compact Laplacian for transform index k of n points.
    static double symbol(SpectralKind kind, int k, int n, double h);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SpectralKind spectral_kind_for_pressure(const Grid2D& grid);
SpectralKind spectral_kind_for_velocity(const Grid2D& grid);

}  // namespace nsac
