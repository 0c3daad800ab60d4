#pragma once

#include "nsac/grid.hpp"

namespace nsac {

/// Boundary data seen by the cell-centred stencils on a walled grid.
/// Ignored on periodic grids.
struct WallCondition {
    enum class Kind { value, zero_gradient };
    Kind kind = Kind::value;
    double value = 0.0;

    static WallCondition dirichlet(double g) { return {Kind::value, g}; }
    static WallCondition neumann() { return {Kind::zero_gradient, 0.0}; }
};

// Second-order central operators.  On walled grids a Dirichlet condition is
// imposed through a quadratically extrapolated ghost value,
// ghost = 8/3 g - 2 u_0 + 1/3 u_1, so grad and div stay second order up to
// the wall.  The Laplacian divides the O(h^3) ghost error by h^2: first order
// in the wall cells, second order inside.

VectorField grad(const ScalarField& f, WallCondition wall = WallCondition::dirichlet(0.0));
ScalarField div(const VectorField& u, WallCondition wall = WallCondition::dirichlet(0.0));
ScalarField laplacian(const ScalarField& f, WallCondition wall = WallCondition::dirichlet(0.0));

/// Momentum forcing -eps (Lap c) grad c, the divergence of the capillary
/// stress -eps (grad c x grad c - |grad c|^2 I / 2).  `c` carries the wall
/// value -1 unless told otherwise.
VectorField capillary_force(const ScalarField& c, double eps,
                            WallCondition wall = WallCondition::dirichlet(-1.0));

// Midpoint-rule quadrature (h^2-weighted sums).
double integrate(const ScalarField& f);
double l1(const ScalarField& f);
double l2(const ScalarField& f);
double inner(const ScalarField& f, const ScalarField& g);
double inner(const VectorField& u, const VectorField& v);
/// sqrt(int |grad u|^2) with central differences and Dirichlet data `wall`.
double h1_seminorm(const ScalarField& u, WallCondition wall = WallCondition::dirichlet(0.0));
double h1_seminorm(const VectorField& u, WallCondition wall = WallCondition::dirichlet(0.0));

// ---------------------------------------------------------------------------
// Compact (face-based) operators used by the time stepper.  Walls use the
// symmetric linear ghost ghost = 2 g - u_0 (or u_0 for zero gradient), which
// makes compact_laplacian the exact variational derivative of
// compact_dirichlet_energy and diagonalisable by sine/cosine transforms.
// The *_into variants write into `out`, reallocating only on a grid change.

ScalarField compact_laplacian(const ScalarField& f, WallCondition wall);
void compact_laplacian_into(const ScalarField& f, WallCondition wall, ScalarField& out);

/// Discrete (1/2) int |grad f|^2 whose gradient w.r.t. the cell values is
/// -h^2 compact_laplacian(f).
double compact_dirichlet_energy(const ScalarField& f, WallCondition wall);

/// Face-normal differences (f_R - f_L)/h.  Wall faces use the ghost of `wall`.
FaceField face_gradient(const ScalarField& f, WallCondition wall);
void face_gradient_into(const ScalarField& f, WallCondition wall, FaceField& out);

/// Cell divergence of face-normal values.
ScalarField face_divergence(const FaceField& u);
void face_divergence_into(const FaceField& u, ScalarField& out);

/// Arithmetic face average of the normal component; wall faces are set to 0.
FaceField face_average(const VectorField& v);
void face_average_into(const VectorField& v, FaceField& out);

/// Arithmetic face average of a scalar; wall faces take the adjacent cell.
FaceField face_average(const ScalarField& f);
void face_average_into(const ScalarField& f, FaceField& out);

/// Average of the two face values bracketing each cell.
VectorField cell_average(const FaceField& u);
void cell_average_into(const FaceField& u, VectorField& out);

/// div(u q) with first-order upwind face values of q.  Wall faces carry no flux.
ScalarField upwind_flux_divergence(const FaceField& u, const ScalarField& q);
void upwind_flux_divergence_into(const FaceField& u, const ScalarField& q, ScalarField& out);

/// div(u q) with centred (arithmetic mean) face values of q.
ScalarField central_flux_divergence(const FaceField& u, const ScalarField& q);
void central_flux_divergence_into(const FaceField& u, const ScalarField& q, ScalarField& out);

}  // namespace nsac
