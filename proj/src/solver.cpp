#include "nsac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "nsac/calculus.hpp"
#include "nsac/errors.hpp"
#include "nsac/log.hpp"

namespace nsac {
namespace {

const WallCondition kPhaseWall = WallCondition::dirichlet(-1.0);
const WallCondition kVelocityWall = WallCondition::dirichlet(0.0);
const WallCondition kPressureWall = WallCondition::neumann();

void require_positive(const ScalarField& rho, const char* where) {
    for (std::size_t k = 0; k < rho.size(); ++k) {
        if (!(rho[k] > 0.0)) {
            std::ostringstream msg;
            msg << where << ": non-positive density " << rho[k] << " at cell " << k;
            throw StateCorruptionError(msg.str());
        }
    }
}

double max_face_speed_sum(const FaceField& u) {
    const Grid2D& g = u.grid;
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double sx = std::max(std::abs(u.x_face(i, j)), std::abs(u.x_face(i + 1, j)));
            const double sy = std::max(std::abs(u.y_face(i, j)), std::abs(u.y_face(i, j + 1)));
            worst = std::max(worst, sx + sy);
        }
    return worst;
}

// Number of wall faces bordering cell (i, j).
int wall_faces(const Grid2D& g, int i, int j) {
    if (g.periodic()) return 0;
    return (i == 0) + (i == g.nx - 1) + (j == 0) + (j == g.ny - 1);
}

void axpy(ScalarField& y, double a, const ScalarField& x) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

}  // namespace

double SolverParams::mobility() const { return m0 * std::pow(eps, theta); }

void validate(const SolverParams& p, const Grid2D& grid, bool allow_exploratory) {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(p.eps)) throw ConfigError("eps must be positive");
    if (!positive(p.m0)) throw ConfigError("m0 must be positive");
    if (!std::isfinite(p.theta)) throw ConfigError("theta must be finite");
    if (!allow_exploratory && !(p.theta > -0.25 && p.theta <= 1.0)) {
        std::ostringstream msg;
        msg << "theta = " << p.theta
            << " is outside the admissible mobility window -1/4 < theta <= 1 (pass --allow-exploratory to run anyway)";
        throw ConfigError(msg.str());
    }
    if (p.dt < 0.0 || !std::isfinite(p.dt)) throw ConfigError("dt must be non-negative");
    if (!positive(p.cfl) || p.cfl > 1.0) throw ConfigError("cfl must lie in (0, 1]");
    if (!positive(p.ac_factor)) throw ConfigError("ac_factor must be positive");
    if (p.diffusive_factor < 0.0) throw ConfigError("diffusive_factor must be non-negative");
    if (p.eps < 4.0 * grid.h() * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "resolution guard: eps = " << p.eps << " < 4h = " << 4.0 * grid.h();
        throw ConfigError(msg.str());
    }
}

ScalarField chemical_potential(const ScalarField& c, const ScalarField& rho, double eps, const DoubleWell& well) {
    require_same_grid(c.grid(), rho.grid(), "chemical_potential");
    require_positive(rho, "chemical_potential");
    ScalarField mu = compact_laplacian(c, kPhaseWall);
    for (std::size_t k = 0; k < mu.size(); ++k) mu[k] = (-eps * mu[k] + rho[k] / eps * well.df(c[k])) / rho[k];
    return mu;
}

ScalarField transport_density(const ScalarField& rho, const FaceField& faces, double dt) {
    require_same_grid(rho.grid(), faces.grid, "transport_density");
    const double courant = dt * max_face_speed_sum(faces) / rho.grid().h();
    if (courant > 1.0) {
        std::ostringstream msg;
        msg << "advective CFL violated: dt (|u|+|v|)/h = " << courant;
        throw CflViolationError(msg.str());
    }
    ScalarField out(rho.grid());
    upwind_flux_divergence_into(faces, rho, out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = rho[k] - dt * out[k];
    return out;
}

ScalarField allen_cahn_step(const ScalarField& c, const ScalarField& rho, const FaceField& faces,
                            const SolverParams& params, double dt, int* iterations) {
    const Grid2D& g = c.grid();
    require_same_grid(g, rho.grid(), "allen_cahn_step");
    require_same_grid(g, faces.grid, "allen_cahn_step");
    require_positive(rho, "allen_cahn_step");
    const double m = params.mobility();
    const double eps = params.eps;
    const double h2 = g.h() * g.h();

    // v.grad c = div(u c) - c div u for the face velocities.
    ScalarField adv(g), divu(g);
    upwind_flux_divergence_into(faces, c, adv);
    face_divergence_into(faces, divu);
    for (std::size_t k = 0; k < adv.size(); ++k) adv[k] -= c[k] * divu[k];

    // (rho^2/dt) c' - m eps Lap0 c' = rho [ (rho/dt) c - rho adv - (m/eps) f'(c) ] + m eps b,
    // where b is the wall contribution of the Dirichlet data.
    const ScalarField wall = compact_laplacian(ScalarField(g), kPhaseWall);
    ScalarField rhs(g);
    std::vector<double> inv_diag(g.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            const double r = rho[k];
            rhs[k] = r * (r / dt * c[k] - r * adv[k] - m / eps * params.well.df(c[k])) + m * eps * wall[k];
            inv_diag[k] = 1.0 / (r * r / dt + m * eps * (4 + wall_faces(g, i, j)) / h2);
        }
    std::vector<double> shift(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) shift[k] = rho[k] * rho[k] / dt;
    auto apply = [&](const ScalarField& in, ScalarField& out) {
        compact_laplacian_into(in, WallCondition::dirichlet(0.0), out);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = shift[k] * in[k] - m * eps * out[k];
    };
    ScalarField next = c;
    const CgResult cg =
        conjugate_gradient(apply, rhs, next, inv_diag, params.ac_tolerance, params.ac_max_iterations, false);
    if (iterations) *iterations = cg.iterations;
    return next;
}

double ginzburg_landau_energy(const ScalarField& c, const ScalarField& rho, double eps, const DoubleWell& well) {
    require_same_grid(c.grid(), rho.grid(), "ginzburg_landau_energy");
    double bulk = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) bulk += rho[k] * well.f(c[k]);
    return eps * compact_dirichlet_energy(c, kPhaseWall) + bulk * c.grid().cell_area() / eps;
}

double kinetic_energy(const ScalarField& rho, const VectorField& v) {
    require_same_grid(rho.grid(), v.grid(), "kinetic_energy");
    double sum = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) sum += rho[k] * (v.x[k] * v.x[k] + v.y[k] * v.y[k]);
    return 0.5 * sum * rho.grid().cell_area();
}

struct NsacSolver::Impl {
    SpectralSolver velocity;
    SpectralSolver pressure;
    // Scratch space reused across steps.
    ScalarField divu, adv, lap;
    FaceField lapc_f, gradc_f, rho_f, gradp_f, base;
    VectorField dv;

    explicit Impl(const Grid2D& g)
        : velocity(g, spectral_kind_for_velocity(g)), pressure(g, spectral_kind_for_pressure(g)) {}
};

NsacSolver::NsacSolver(const Grid2D& grid, SolverParams params)
    : grid_(grid), params_(std::move(params)), impl_(std::make_unique<Impl>(grid)) {}
NsacSolver::~NsacSolver() = default;
NsacSolver::NsacSolver(NsacSolver&&) noexcept = default;
NsacSolver& NsacSolver::operator=(NsacSolver&&) noexcept = default;

SimState NsacSolver::initial_state(const ScalarField& c, const ScalarField& rho) const {
    return initial_state(c, rho, VectorField(grid_));
}

SimState NsacSolver::initial_state(const ScalarField& c, const ScalarField& rho, const VectorField& v) const {
    require_same_grid(grid_, c.grid(), "initial_state");
    require_same_grid(grid_, rho.grid(), "initial_state");
    require_same_grid(grid_, v.grid(), "initial_state");
    require_positive(rho, "initial_state");
    SimState s;
    s.c = c;
    s.rho = rho;
    s.p = ScalarField(grid_);
    s.faces = face_average(v);
    s.v = v;
    if (v.max_norm() > 0.0) {
        PoissonResult pr = poisson_solve(face_divergence(s.faces), params_.poisson, &impl_->pressure);
        const FaceField gp = face_gradient(pr.solution, kPressureWall);
        for (std::size_t k = 0; k < gp.ux.size(); ++k) s.faces.ux[k] -= gp.ux[k];
        for (std::size_t k = 0; k < gp.uy.size(); ++k) s.faces.uy[k] -= gp.uy[k];
        const VectorField dv = cell_average(gp);
        axpy(s.v.x, -1.0, dv.x);
        axpy(s.v.y, -1.0, dv.y);
    }
    s.mu = chemical_potential(c, rho, params_.eps, params_.well);
    return s;
}

double NsacSolver::stable_time_step(const SimState& state) const {
    if (params_.dt > 0.0) return params_.dt;
    const double h = grid_.h();
    const double speed = std::max(state.v.max_norm(), state.faces.max_abs());
    double dt = params_.ac_factor * params_.eps * params_.eps * state.rho.min() / params_.mobility();
    if (speed > 0.0) dt = std::min(dt, params_.cfl * h / speed);
    if (params_.diffusive_factor > 0.0) dt = std::min(dt, params_.diffusive_factor * h * h);
    return dt;
}

NsacSolver::MomentumUpdate NsacSolver::momentum_step(const SimState& state, const ScalarField& rho_new,
                                                     const ScalarField& c_new, double dt) const {
    const Grid2D& g = grid_;
    require_positive(rho_new, "momentum_step");
    const double rho0 = rho_new.min();
    const double nu0 = 1.0 / rho0;
    const std::size_t n = g.size();
    Impl& w = *impl_;

    // Explicit part: advection and the non-constant remainder of Lap v / rho.
    face_divergence_into(state.faces, w.divu);
    VectorField vstar(g);
    for (const auto comp : {&VectorField::x, &VectorField::y}) {
        const ScalarField& q = state.v.*comp;
        central_flux_divergence_into(state.faces, q, w.adv);
        compact_laplacian_into(q, kVelocityWall, w.lap);
        ScalarField& out = vstar.*comp;
        for (std::size_t k = 0; k < n; ++k)
            out[k] = q[k] + dt * (-(w.adv[k] - q[k] * w.divu[k]) + (1.0 / rho_new[k] - nu0) * w.lap[k]);
        // Implicit constant-coefficient viscosity: (I - dt nu0 Lap) v* = vhat.
        w.velocity.solve_into(out, 1.0, dt * nu0, out);
    }

    // Face accelerations: capillary force over rho and the pressure-split
    // correction -(1/rho_f - 1/rho0) grad p^n.
    compact_laplacian_into(c_new, kPhaseWall, w.lap);
    face_average_into(w.lap, w.lapc_f);
    face_gradient_into(c_new, kPhaseWall, w.gradc_f);
    face_average_into(rho_new, w.rho_f);
    face_gradient_into(state.p, kPressureWall, w.gradp_f);
    face_average_into(vstar, w.base);
    MomentumUpdate out;
    out.faces = w.base;
    FaceField& u = out.faces;
    auto accelerate = [&](std::vector<double>& uf, const std::vector<double>& lc, const std::vector<double>& gc,
                          const std::vector<double>& rf, const std::vector<double>& gp) {
        for (std::size_t k = 0; k < uf.size(); ++k) {
            const double force = -params_.eps * lc[k] * gc[k];
            uf[k] += dt * (force / rf[k] - (1.0 / rf[k] - 1.0 / rho0) * gp[k]);
        }
    };
    accelerate(u.ux, w.lapc_f.ux, w.gradc_f.ux, w.rho_f.ux, w.gradp_f.ux);
    accelerate(u.uy, w.lapc_f.uy, w.gradc_f.uy, w.rho_f.uy, w.gradp_f.uy);
    if (!g.periodic()) {
        for (int j = 0; j < g.ny; ++j) u.x_face(0, j) = u.x_face(g.nx, j) = 0.0;
        for (int i = 0; i < g.nx; ++i) u.y_face(i, 0) = u.y_face(i, g.ny) = 0.0;
    } else {
        for (int j = 0; j < g.ny; ++j) u.x_face(g.nx, j) = u.x_face(0, j);
        for (int i = 0; i < g.nx; ++i) u.y_face(i, g.ny) = u.y_face(i, 0);
    }

    // Projection with the constant density rho0.
    face_divergence_into(u, w.divu);
    for (double& x : w.divu.values()) x *= rho0 / dt;
    PoissonResult pr = poisson_solve(w.divu, params_.poisson, &w.pressure);
    face_gradient_into(pr.solution, kPressureWall, w.gradp_f);
    for (std::size_t k = 0; k < u.ux.size(); ++k) {
        u.ux[k] -= dt / rho0 * w.gradp_f.ux[k];
        w.base.ux[k] = u.ux[k] - w.base.ux[k];
    }
    for (std::size_t k = 0; k < u.uy.size(); ++k) {
        u.uy[k] -= dt / rho0 * w.gradp_f.uy[k];
        w.base.uy[k] = u.uy[k] - w.base.uy[k];
    }
    // The cell velocity receives the averaged face increments.
    cell_average_into(w.base, w.dv);
    axpy(vstar.x, 1.0, w.dv.x);
    axpy(vstar.y, 1.0, w.dv.y);
    out.v = std::move(vstar);
    out.p = std::move(pr.solution);
    out.poisson_residual = pr.relative_residual;
    return out;
}

StepLog NsacSolver::step(SimState& state, double dt) const {
    require_same_grid(grid_, state.grid(), "NsacSolver::step");
    if (!(dt > 0.0)) dt = stable_time_step(state);

    ScalarField rho_new = transport_density(state.rho, state.faces, dt);
    require_positive(rho_new, "transport_density");
    int iterations = 0;
    ScalarField c_new = allen_cahn_step(state.c, rho_new, state.faces, params_, dt, &iterations);
    MomentumUpdate mom = momentum_step(state, rho_new, c_new, dt);

    state.t += dt;
    state.step += 1;
    state.rho = std::move(rho_new);
    state.c = std::move(c_new);
    state.v = std::move(mom.v);
    state.faces = std::move(mom.faces);
    state.p = std::move(mom.p);
    state.mu = chemical_potential(state.c, state.rho, params_.eps, params_.well);

    StepLog log;
    log.step = state.step;
    log.t = state.t;
    log.dt = dt;
    log.max_abs_c = state.c.max_abs();
    log.rho_min = state.rho.min();
    log.rho_max = state.rho.max();
    log.max_velocity = state.v.max_norm();
    log.divergence_l2 = l2(face_divergence(state.faces));
    log.poisson_residual = mom.poisson_residual;
    log.ac_iterations = iterations;

    if (!state.c.all_finite() || !state.v.x.all_finite() || !state.v.y.all_finite() || !state.p.all_finite())
        throw StateCorruptionError("non-finite values after step " + std::to_string(state.step));
    std::ostringstream bad;
    if (log.max_abs_c > params_.c_bound) bad << "max|c| = " << log.max_abs_c << " > " << params_.c_bound << "; ";
    if (log.divergence_l2 > params_.divergence_tolerance)
        bad << "divergence " << log.divergence_l2 << " > " << params_.divergence_tolerance << "; ";
    log.violations = bad.str();
    log.clean = log.violations.empty();
    if (!log.clean) log_warning("step " + std::to_string(state.step) + ": " + log.violations);
    return log;
}

}  // namespace nsac
