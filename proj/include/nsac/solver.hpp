#pragma once

#include <memory>
#include <string>

#include "nsac/grid.hpp"
#include "nsac/poisson.hpp"
#include "nsac/potential.hpp"
#include "nsac/spectral.hpp"

namespace nsac {

/// Parameters of the diffuse-interface model and its time stepper.
/// Viscosity is 1.  The mobility is m0 eps^theta.
struct SolverParams {
    double eps = 0.04;
    double m0 = 1.0;
    double theta = 0.0;
    DoubleWell well = DoubleWell::quartic();

    /// Fixed time step; 0 selects the adaptive rule of stable_time_step.
    double dt = 0.0;
    double cfl = 0.4;
    double ac_factor = 0.2;
    /// Coefficient of the h^2 cap; 0 drops the cap.
    double diffusive_factor = 0.4;

    PoissonOptions poisson{};
    double ac_tolerance = 1e-12;
    int ac_max_iterations = 5000;

    /// Post-projection l2 divergence above this is flagged in the step log.
    double divergence_tolerance = 1e-8;
    double c_bound = 1.05;

    double mobility() const;
};

/// Throws ConfigError for eps, m0, factors out of range, theta outside
/// (-1/4, 1] (unless `allow_exploratory`) or eps < 4h.
void validate(const SolverParams& params, const Grid2D& grid, bool allow_exploratory = false);

/// Full state of the diffuse model.  `faces` carries the discretely
/// divergence-free face velocities that transport rho and c; `v` is the
/// cell-centred velocity.
struct SimState {
    double t = 0.0;
    long step = 0;
    ScalarField rho;
    VectorField v;
    FaceField faces;
    ScalarField p;
    ScalarField c;
    ScalarField mu;

    const Grid2D& grid() const { return c.grid(); }
};

/// Per-step invariant record.
struct StepLog {
    long step = 0;
    double t = 0.0;
    double dt = 0.0;
    double max_abs_c = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
    double max_velocity = 0.0;
    double divergence_l2 = 0.0;
    double poisson_residual = 0.0;
    int ac_iterations = 0;
    bool clean = true;
    std::string violations;
};

/// mu = (-eps Lap_h c + (rho / eps) f'(c)) / rho with c = -1 on walls.
/// Throws StateCorruptionError if rho <= 0 anywhere.
ScalarField chemical_potential(const ScalarField& c, const ScalarField& rho, double eps, const DoubleWell& well);

/// rho - dt div(rho u) with first-order upwind fluxes.  Throws
/// CflViolationError when dt (|u| + |v|) / h exceeds 1 on some cell.
ScalarField transport_density(const ScalarField& rho, const FaceField& faces, double dt);

/// Semi-implicit Allen-Cahn update: advection and f' explicit, the
/// eps Lap c part of the mobility term implicit.  `rho` is the density at
/// the new time level.  `iterations` receives the CG iteration count.
ScalarField allen_cahn_step(const ScalarField& c, const ScalarField& rho, const FaceField& faces,
                            const SolverParams& params, double dt, int* iterations = nullptr);

/// Discrete Ginzburg-Landau energy int eps/2 |grad c|^2 + (rho/eps) f(c),
/// with the gradient part in the face form consistent with Lap_h.
double ginzburg_landau_energy(const ScalarField& c, const ScalarField& rho, double eps, const DoubleWell& well);

double kinetic_energy(const ScalarField& rho, const VectorField& v);

class NsacSolver {
public:
    NsacSolver(const Grid2D& grid, SolverParams params);
    ~NsacSolver();
    NsacSolver(NsacSolver&&) noexcept;
    NsacSolver& operator=(NsacSolver&&) noexcept;

    const Grid2D& grid() const { return grid_; }
    const SolverParams& params() const { return params_; }

    /// Builds a state from phase and density fields and an initial velocity,
    /// which is projected onto the discretely divergence-free face space.
    SimState initial_state(const ScalarField& c, const ScalarField& rho, const VectorField& v) const;
    SimState initial_state(const ScalarField& c, const ScalarField& rho) const;

    /// min(cfl h / max|v|, ac_factor eps^2 rho_min / m, diffusive_factor h^2),
    /// or the fixed step if one is configured.
    double stable_time_step(const SimState& state) const;

    struct MomentumUpdate {
        VectorField v;
        FaceField faces;
        ScalarField p;
        double poisson_residual = 0.0;
    };

    /// Explicit advection and capillary forcing, implicit viscous solve and
    /// approximate projection with a constant reference density.
    MomentumUpdate momentum_step(const SimState& state, const ScalarField& rho_new, const ScalarField& c_new,
                                 double dt) const;

    /// transport_density -> chemical_potential -> allen_cahn_step ->
    /// momentum_step, advancing t by dt (or by the stable step when dt <= 0).
    StepLog step(SimState& state, double dt = 0.0) const;

private:
    struct Impl;
    Grid2D grid_;
    SolverParams params_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace nsac
