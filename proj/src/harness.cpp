#include "nsac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <cstdio>
#include <sstream>
#include <thread>

#include "nsac/errors.hpp"
#include "nsac/io.hpp"
#include "nsac/log.hpp"

namespace nsac {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr std::size_t kKeptViolations = 20;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

// JSON has no NaN/inf; encode them as null.
ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::vector<double> event_times(double interval, double t_end) {
    std::vector<double> times = {0.0};
    if (interval <= 0.0) {
        times.push_back(t_end);
        return times;
    }
    const long count = static_cast<long>(std::floor(t_end / interval * (1.0 + 1e-12)));
    for (long k = 1; k <= count; ++k) {
        const double t = k * interval;
        if (t < t_end * (1.0 - 1e-12)) times.push_back(t);
    }
    times.push_back(t_end);
    return times;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::string tag(double v) { return format_double(v); }

}  // namespace

nlohmann::ordered_json to_json(const RunSummary& s) {
    ordered_json gron = {{"C", number(s.gronwall.C)},
                         {"admissible", s.gronwall.admissible},
                         {"horizon", number(s.gronwall_horizon)},
                         {"note", s.gronwall.note}};
    return ordered_json{{"schema", "nsac-run-1"},
                        {"status", s.status},
                        {"error", s.error},
                        {"scenario", s.scenario},
                        {"eps", s.eps},
                        {"theta", s.theta},
                        {"nx", s.nx},
                        {"ny", s.ny},
                        {"steps", s.steps},
                        {"t_final", s.t_final},
                        {"runtime_seconds", s.runtime_seconds},
                        {"dt_min", number(s.dt_min)},
                        {"dt_max", number(s.dt_max)},
                        {"clean", s.clean},
                        {"violation_count", s.violation_count},
                        {"violations", s.violations},
                        {"max_abs_c", s.max_abs_c},
                        {"max_divergence", s.max_divergence},
                        {"max_poisson_residual", s.max_poisson_residual},
                        {"rho_sup_initial", s.rho_sup_initial},
                        {"rho_sup_max", s.rho_sup_max},
                        {"rho_inf_initial", s.rho_inf_initial},
                        {"rho_inf_min", s.rho_inf_min},
                        {"max_abs_identity_residual", number(s.max_abs_identity_residual)},
                        {"final_total", number(s.final_total)},
                        {"sup_l1_psi", number(s.sup_l1_psi)},
                        {"gronwall", gron}};
}

RunSummary run_simulation(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = cfg.output.directory;
    fs::create_directories(dir);
    write_text(dir / "config.json", to_json(cfg).dump(2) + "\n");

    const Grid2D& grid = cfg.grid;
    const SolverParams& sp = cfg.solver;
    RunSummary sum;
    sum.directory = dir;
    sum.scenario = to_string(cfg.scenario);
    sum.eps = sp.eps;
    sum.theta = sp.theta;
    sum.nx = grid.nx;
    sum.ny = grid.ny;

    geometry::AnalyticInterface iface = cfg.interface;
    if (grid.periodic()) iface.period = geometry::Vec2{grid.Lx, grid.Ly};
    const bool bubble = cfg.scenario != ScenarioType::quiescent;

    const double c0 = surface_tension_c0(sp.well);
    const PsiMap psi(sp.well, cfg.densities);
    const DiagnosticContext ctx{cfg.geometry, sp.eps, sp.mobility(), c0, &sp.well, &psi};
    const NsacSolver solver(grid, sp);

    SimState state;
    if (bubble) {
        const InitialPhase init = well_prepared_init(iface, cfg.geometry, grid, sp.eps, sp.well, cfg.densities);
        VectorField v(grid);
        if (cfg.scenario == ScenarioType::transported_bubble) {
            v.x = ScalarField(grid, iface.velocity.x);
            v.y = ScalarField(grid, iface.velocity.y);
        }
        state = solver.initial_state(init.c, init.rho, v);
    } else {
        state = solver.initial_state(ScalarField(grid, -1.0), ScalarField(grid, cfg.densities.rho_minus));
    }

    const bool moving_reference = cfg.scenario == ScenarioType::transported_bubble;
    SharpState sharp = sharp_state(cfg.scenario, grid, iface, cfg.geometry, cfg.densities, c0, 0.0);
    auto reference_at = [&](double t) -> const SharpState& {
        if (moving_reference && sharp.t != t)
            sharp = sharp_state(cfg.scenario, grid, iface, cfg.geometry, cfg.densities, c0, t);
        return sharp;
    };

    sum.rho_sup_initial = sum.rho_sup_max = state.rho.max();
    sum.rho_inf_initial = sum.rho_inf_min = state.rho.min();
    sum.max_abs_c = state.c.max_abs();
    sum.dt_min = std::numeric_limits<double>::infinity();
    sum.dt_max = 0.0;

    CsvWriter monitors(dir / "monitors.csv",
                       {"step", "t", "dt", "max_abs_c", "rho_min", "rho_max", "max_velocity", "divergence_l2",
                        "poisson_residual", "ac_iterations", "clean", "ginzburg_landau", "kinetic",
                        "identity_residual"});
    CsvWriter report_csv(dir / "report.csv", energy_report_columns());

    double gl = ginzburg_landau_energy(state.c, state.rho, sp.eps, sp.well);
    monitors.row({0.0, 0.0, 0.0, state.c.max_abs(), state.rho.min(), state.rho.max(),
                  std::max(state.v.x.max_abs(), state.v.y.max_abs()), 0.0, 0.0, 0.0, 1.0, gl,
                  kinetic_energy(state.rho, state.v), nan()});

    const double t_end = cfg.output.t_end;
    const std::vector<double> report_times = event_times(cfg.output.report_interval, t_end);
    const std::vector<double> snapshot_times = event_times(cfg.output.snapshot_interval, t_end);
    std::size_t next_report = 0, next_snapshot = 0;
    int snapshot_index = 0;
    double last_identity = nan();

    auto emit_events = [&] {
        if (next_report < report_times.size() && state.t == report_times[next_report]) {
            EnergyReport r = energy_report(state, reference_at(state.t), ctx);
            r.identity_residual = last_identity;
            report_csv.row(energy_report_values(r));
            sum.reports.push_back(r);
            ++next_report;
            log_info(dir.string() + ": t = " + format_double(state.t) + ", E + E_vol = " +
                     format_double(r.E + r.E_vol));
        }
        if (next_snapshot < snapshot_times.size() && state.t == snapshot_times[next_snapshot]) {
            char index[16];
            std::snprintf(index, sizeof(index), "_%04d", snapshot_index++);
            for (const auto& field : cfg.output.snapshot_fields) {
                const std::string name = field + index;
                if (field == "c") write_snapshot(dir, name, state.c, state.t);
                else if (field == "rho") write_snapshot(dir, name, state.rho, state.t);
                else if (field == "p") write_snapshot(dir, name, state.p, state.t);
                else if (field == "vx") write_snapshot(dir, name, state.v.x, state.t);
                else if (field == "vy") write_snapshot(dir, name, state.v.y, state.t);
                else if (field == "mu") write_snapshot(dir, name, state.mu, state.t);
                else if (field == "chi") write_snapshot(dir, name, reference_at(state.t).chi, state.t);
            }
            ++next_snapshot;
        }
    };

    auto finish = [&] {
        sum.t_final = state.t;
        sum.steps = state.step;
        if (sum.steps == 0) sum.dt_min = sum.dt_max = nan();
        sum.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!sum.reports.empty()) {
            sum.final_total = sum.reports.back().E + sum.reports.back().E_vol;
            for (const auto& r : sum.reports) sum.sup_l1_psi = std::max(sum.sup_l1_psi, r.l1_psi);
        }
        sum.gronwall_horizon = nan();
        if (sum.reports.size() >= 10) {
            std::vector<double> t, s;
            for (const auto& r : sum.reports) {
                t.push_back(r.t);
                s.push_back(r.E + r.E_vol);
            }
            sum.gronwall = gronwall_monitor(t, s, sp.eps);
            for (std::size_t k = t.size(); k >= 10; --k) {
                const GronwallFit prefix = gronwall_monitor({t.begin(), t.begin() + k}, {s.begin(), s.begin() + k}, sp.eps);
                if (prefix.admissible && std::isfinite(prefix.C)) {
                    sum.gronwall_horizon = t[k - 1];
                    break;
                }
            }
        } else {
            sum.gronwall.note = "fewer than 10 reports";
            sum.gronwall.C = nan();
        }
        write_text(dir / "summary.json", to_json(sum).dump(2) + "\n");
    };

    try {
        emit_events();
        while (state.t < t_end) {
            double target = t_end;
            if (next_report < report_times.size()) target = std::min(target, report_times[next_report]);
            if (next_snapshot < snapshot_times.size()) target = std::min(target, snapshot_times[next_snapshot]);
            const double remaining = target - state.t;
            const double dt = std::min(solver.stable_time_step(state), remaining);
            const double gl_before = gl;
            const StepLog log = solver.step(state, dt);
            // land on event times exactly
            if (dt == remaining || state.t >= target - 1e-12 * std::max(1.0, target)) state.t = target;

            last_identity = nan();
            if (cfg.output.identity_monitor) {
                last_identity = energy_identity_residual(gl_before, state, dt, ctx, &gl);
                sum.max_abs_identity_residual = std::max(sum.max_abs_identity_residual, std::abs(last_identity));
            }
            std::string violations = log.violations;
            if (state.rho.max() > sum.rho_sup_initial + 1e-12 || state.rho.min() < sum.rho_inf_initial - 1e-12) {
                if (!violations.empty()) violations += "; ";
                violations += "density left its initial range";
            }
            sum.dt_min = std::min(sum.dt_min, dt);
            sum.dt_max = std::max(sum.dt_max, dt);
            sum.max_abs_c = std::max(sum.max_abs_c, log.max_abs_c);
            sum.max_divergence = std::max(sum.max_divergence, log.divergence_l2);
            sum.max_poisson_residual = std::max(sum.max_poisson_residual, log.poisson_residual);
            sum.rho_sup_max = std::max(sum.rho_sup_max, log.rho_max);
            sum.rho_inf_min = std::min(sum.rho_inf_min, log.rho_min);
            if (!violations.empty()) {
                sum.clean = false;
                ++sum.violation_count;
                if (sum.violations.size() < kKeptViolations)
                    sum.violations.push_back("step " + std::to_string(log.step) + ": " + violations);
            }
            monitors.row({static_cast<double>(log.step), state.t, dt, log.max_abs_c, log.rho_min, log.rho_max,
                          log.max_velocity, log.divergence_l2, log.poisson_residual,
                          static_cast<double>(log.ac_iterations), violations.empty() ? 1.0 : 0.0,
                          cfg.output.identity_monitor ? gl : ginzburg_landau_energy(state.c, state.rho, sp.eps, sp.well),
                          kinetic_energy(state.rho, state.v), last_identity});
            emit_events();
        }
    } catch (const std::exception& e) {
        sum.status = "aborted";
        sum.error = e.what();
        sum.clean = false;
        finish();
        throw;
    }
    finish();
    return sum;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs, std::string functional) {
    if (pairs.size() < 3)
        throw std::invalid_argument("rate fit needs at least 3 (eps, value) pairs, got " + std::to_string(pairs.size()));
    double sx = 0, sy = 0;
    for (const auto& [e, v] : pairs) {
        if (!(e > 0.0) || !(v > 0.0) || !std::isfinite(e) || !std::isfinite(v))
            throw std::invalid_argument("rate fit needs positive finite pairs");
        sx += std::log(e);
        sy += std::log(v);
    }
    const double n = static_cast<double>(pairs.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [e, v] : pairs) {
        sxx += (std::log(e) - mx) * (std::log(e) - mx);
        sxy += (std::log(e) - mx) * (std::log(v) - my);
    }
    std::vector<double> eps;
    for (const auto& pr : pairs) eps.push_back(pr.first);
    std::sort(eps.begin(), eps.end());
    if (std::adjacent_find(eps.begin(), eps.end()) != eps.end() || !(sxx > 0.0))
        throw std::invalid_argument("rate fit needs distinct eps values");
    RateFit fit;
    fit.functional = std::move(functional);
    fit.pairs = pairs;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (const auto& [e, v] : pairs) {
        const double r = std::log(v) - (fit.intercept + fit.slope * std::log(e));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

int worker_count() {
    if (const char* env = std::getenv("NSAC_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
        log_warning("ignoring NSAC_THREADS='" + std::string(env) + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
    const auto start = std::chrono::steady_clock::now();
    SweepResult result;
    result.spec = spec;
    fs::create_directories(spec.output);

    for (double theta : spec.theta) {
        for (std::size_t i = 0; i < spec.eps.size(); ++i) {
            for (int refined = 0; refined <= (spec.mesh_refinement ? 1 : 0); ++refined) {
                SweepMember m;
                m.eps = spec.eps[i];
                m.n = spec.grids[i] * (refined ? 2 : 1);
                m.theta = theta;
                m.refined = refined != 0;
                m.directory = spec.output / ("theta_" + tag(theta)) / ("eps_" + tag(m.eps) + "_n" + std::to_string(m.n));
                result.members.push_back(std::move(m));
            }
        }
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < result.members.size(); k = next++) {
            SweepMember& m = result.members[k];
            try {
                const RunConfig cfg = member_config(spec, m.eps, m.n, m.theta, m.directory);
                m.summary = run_simulation(cfg);
                m.completed = true;
            } catch (const std::exception& e) {
                m.note = e.what();
            }
        }
    };
    const int count = std::max(1, std::min<int>(workers, static_cast<int>(result.members.size())));
    {
        std::vector<std::jthread> pool;
        for (int w = 1; w < count; ++w) pool.emplace_back(work);
        work();
    }

    // single-threaded reduction
    for (SweepMember& m : result.members) {
        const std::string who = "eps = " + tag(m.eps) + ", n = " + std::to_string(m.n) + ", theta = " + tag(m.theta);
        if (!m.completed) {
            result.errors.push_back("member " + who + " failed: " + m.note);
        } else if (!m.summary.clean) {
            m.excluded = true;
            m.note = "invariant log not clean (" + std::to_string(m.summary.violation_count) + " violating steps)";
            log_warning("excluding " + who + ": " + m.note);
        }
    }

    for (double theta : spec.theta) {
        std::vector<std::pair<double, double>> total, l1;
        std::vector<double> excluded;
        GronwallSummary gs;
        gs.theta = theta;
        for (const SweepMember& m : result.members) {
            if (m.theta != theta || m.refined) continue;
            if (!m.completed || m.excluded) {
                excluded.push_back(m.eps);
                continue;
            }
            total.emplace_back(m.eps, m.summary.final_total);
            l1.emplace_back(m.eps, m.summary.sup_l1_psi);
            gs.eps.push_back(m.eps);
            gs.constants.push_back(m.summary.gronwall.C);
        }
        gs.spread = gronwall_spread(gs.constants);
        result.gronwall.push_back(gs);
        for (auto& [name, pairs] : {std::pair{std::string("E+E_vol"), total}, std::pair{std::string("sup_l1_psi"), l1}}) {
            try {
                RateFit fit = fit_rate(pairs, name);
                fit.theta = theta;
                fit.excluded_eps = excluded;
                result.fits.push_back(std::move(fit));
            } catch (const std::invalid_argument& e) {
                result.errors.push_back("fit of " + name + " at theta = " + tag(theta) + " refused: " + e.what());
            }
        }
    }

    if (spec.mesh_refinement) {
        for (const SweepMember& coarse : result.members) {
            if (coarse.refined || !coarse.completed) continue;
            const auto fine = std::find_if(result.members.begin(), result.members.end(), [&](const SweepMember& f) {
                return f.refined && f.completed && f.eps == coarse.eps && f.theta == coarse.theta;
            });
            if (fine == result.members.end()) continue;
            CoercivityComparison cmp;
            cmp.theta = coarse.theta;
            cmp.eps = coarse.eps;
            cmp.n = coarse.n;
            cmp.n_fine = fine->n;
            cmp.max_relative_change.assign(kCoercivityTerms, 0.0);
            const auto& a = coarse.summary.reports;
            const auto& b = fine->summary.reports;
            for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
                if (a[k].t != b[k].t || a[k].coercivity_degenerate || b[k].coercivity_degenerate) continue;
                ++cmp.samples;
                for (std::size_t q = 0; q < kCoercivityTerms; ++q) {
                    const double rc = a[k].coercivity_ratio[q], rf = b[k].coercivity_ratio[q];
                    if (!std::isfinite(rc) || !std::isfinite(rf)) {
                        cmp.finite = false;
                        continue;
                    }
                    const double change = rc != 0.0 ? std::abs(rf / rc - 1.0) : (rf == 0.0 ? 0.0 : nan());
                    cmp.max_relative_change[q] = std::isnan(change) || std::isnan(cmp.max_relative_change[q])
                                                     ? nan()
                                                     : std::max(cmp.max_relative_change[q], change);
                }
            }
            cmp.within = cmp.finite && cmp.samples > 0 &&
                         std::all_of(cmp.max_relative_change.begin(), cmp.max_relative_change.end(),
                                     [](double c) { return c <= 0.3; });
            result.coercivity.push_back(cmp);
        }
    }

    result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(spec.output / "rates.json", to_json(result).dump(2) + "\n");
    return result;
}

nlohmann::ordered_json to_json(const SweepResult& r) {
    ordered_json members = ordered_json::array();
    for (const SweepMember& m : r.members) {
        members.push_back({{"eps", m.eps},
                           {"n", m.n},
                           {"theta", m.theta},
                           {"refined", m.refined},
                           {"directory", m.directory.string()},
                           {"status", !m.completed ? "failed" : (m.excluded ? "excluded" : "ok")},
                           {"note", m.note},
                           {"final_total", number(m.summary.final_total)},
                           {"sup_l1_psi", number(m.summary.sup_l1_psi)},
                           {"gronwall_C", number(m.summary.gronwall.C)},
                           {"gronwall_horizon", number(m.summary.gronwall_horizon)},
                           {"max_abs_c", m.summary.max_abs_c},
                           {"max_divergence", m.summary.max_divergence},
                           {"max_abs_identity_residual", number(m.summary.max_abs_identity_residual)},
                           {"steps", m.summary.steps},
                           {"runtime_seconds", m.summary.runtime_seconds}});
    }
    ordered_json fits = ordered_json::array();
    for (const RateFit& f : r.fits) {
        ordered_json pairs = ordered_json::array();
        for (const auto& [e, v] : f.pairs) pairs.push_back({e, v});
        fits.push_back({{"functional", f.functional},
                        {"theta", f.theta},
                        {"pairs", pairs},
                        {"slope", f.slope},
                        {"intercept", f.intercept},
                        {"residual", f.residual},
                        {"excluded_eps", f.excluded_eps}});
    }
    ordered_json gron = ordered_json::array();
    for (const GronwallSummary& g : r.gronwall) {
        ordered_json cs = ordered_json::array();
        for (double c : g.constants) cs.push_back(number(c));
        gron.push_back({{"theta", g.theta}, {"eps", g.eps}, {"C", cs}, {"spread", number(g.spread)}});
    }
    ordered_json coer = ordered_json::array();
    for (const CoercivityComparison& c : r.coercivity) {
        ordered_json changes = ordered_json::array();
        for (double v : c.max_relative_change) changes.push_back(number(v));
        coer.push_back({{"theta", c.theta},
                        {"eps", c.eps},
                        {"n", c.n},
                        {"n_fine", c.n_fine},
                        {"ratios", kCoercivityNames},
                        {"max_relative_change", changes},
                        {"samples", c.samples},
                        {"finite", c.finite},
                        {"within_30_percent", c.within}});
    }
    return ordered_json{{"schema", "nsac-rates-1"},
                        {"name", r.spec.name},
                        {"t_end", r.spec.t_end},
                        {"complete", r.complete()},
                        {"errors", r.errors},
                        {"runtime_seconds", r.runtime_seconds},
                        {"members", members},
                        {"fits", fits},
                        {"gronwall", gron},
                        {"coercivity_refinement", coer}};
}

std::string format_report(const fs::path& dir) {
    std::ostringstream out;
    out << std::setprecision(6);
    auto show = [](const nlohmann::json& v) -> std::string {
        if (v.is_null()) return "n/a";
        if (v.is_number()) {
            std::ostringstream s;
            s << std::setprecision(6) << v.get<double>();
            return s.str();
        }
        return v.is_string() ? v.get<std::string>() : v.dump();
    };
    if (fs::exists(dir / "rates.json")) {
        const nlohmann::json j = read_json_file(dir / "rates.json");
        out << "sweep " << show(j.at("name")) << " (" << (j.at("complete").get<bool>() ? "complete" : "incomplete")
            << ", " << show(j.at("runtime_seconds")) << " s)\n";
        for (const auto& m : j.at("members"))
            out << "  theta " << show(m.at("theta")) << "  eps " << show(m.at("eps")) << "  n " << show(m.at("n"))
                << "  " << show(m.at("status")) << "  E+E_vol(T) " << show(m.at("final_total")) << "  sup l1 "
                << show(m.at("sup_l1_psi")) << "  C " << show(m.at("gronwall_C")) << "\n";
        for (const auto& f : j.at("fits"))
            out << "fit " << show(f.at("functional")) << " theta " << show(f.at("theta")) << ": slope "
                << show(f.at("slope")) << ", residual " << show(f.at("residual")) << "\n";
        for (const auto& g : j.at("gronwall"))
            out << "gronwall theta " << show(g.at("theta")) << ": spread " << show(g.at("spread")) << "\n";
        for (const auto& c : j.at("coercivity_refinement"))
            out << "coercivity eps " << show(c.at("eps")) << " n " << show(c.at("n")) << " -> " << show(c.at("n_fine"))
                << ": max change " << c.at("max_relative_change").dump() << "\n";
        for (const auto& e : j.at("errors")) out << "error: " << e.get<std::string>() << "\n";
        return out.str();
    }
    if (!fs::exists(dir / "summary.json")) throw ConfigError(dir.string() + " holds neither summary.json nor rates.json");
    const nlohmann::json s = read_json_file(dir / "summary.json");
    out << "run " << dir.string() << ": " << show(s.at("scenario")) << ", eps " << show(s.at("eps")) << ", theta "
        << show(s.at("theta")) << ", " << show(s.at("nx")) << "x" << show(s.at("ny")) << "\n";
    out << "  status " << show(s.at("status")) << (s.at("error").get<std::string>().empty() ? "" : " (" + show(s.at("error")) + ")")
        << ", " << show(s.at("steps")) << " steps to t = " << show(s.at("t_final")) << " in "
        << show(s.at("runtime_seconds")) << " s, dt in [" << show(s.at("dt_min")) << ", " << show(s.at("dt_max")) << "]\n";
    out << "  invariant log " << (s.at("clean").get<bool>() ? "clean" : "NOT clean") << ", max|c| "
        << show(s.at("max_abs_c")) << ", max div " << show(s.at("max_divergence")) << ", rho in ["
        << show(s.at("rho_inf_min")) << ", " << show(s.at("rho_sup_max")) << "]\n";
    out << "  E+E_vol(T) " << show(s.at("final_total")) << ", sup l1_psi " << show(s.at("sup_l1_psi"))
        << ", max |identity residual| " << show(s.at("max_abs_identity_residual")) << "\n";
    out << "  gronwall C " << show(s.at("gronwall").at("C")) << ", horizon " << show(s.at("gronwall").at("horizon"))
        << "\n";
    for (const auto& v : s.at("violations")) out << "  " << v.get<std::string>() << "\n";
    if (fs::exists(dir / "report.csv")) {
        const CsvTable t = read_csv(dir / "report.csv");
        out << "  reports: " << t.rows.size() << "\n";
        const auto ts = t.column("t"), E = t.column("E"), V = t.column("E_vol"), l1 = t.column("l1_psi");
        for (std::size_t k = 0; k < t.rows.size(); ++k)
            out << "    t " << ts[k] << "  E " << E[k] << "  E_vol " << V[k] << "  l1_psi " << l1[k] << "\n";
    }
    return out.str();
}

}  // namespace nsac
