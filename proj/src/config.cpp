#include "nsac/config.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>

#include "nsac/errors.hpp"

namespace nsac {

using nlohmann::json;

namespace {

// Object reader that remembers which keys were consumed so leftovers
// (usually typos) can be reported.
class Block {
public:
    Block(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + " must be a JSON object");
    }

    const json* find(const std::string& key) {
        used_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() || it->is_null() ? nullptr : &*it;
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        const json* v = find(key);
        return v ? convert<T>(*v, key) : fallback;
    }

    template <class T>
    T require(const std::string& key) {
        const json* v = find(key);
        if (!v) throw ConfigError(where_ + "." + key + " is required");
        return convert<T>(*v, key);
    }

    std::string path(const std::string& key) const { return where_ + "." + key; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError("unknown key " + where_ + "." + it.key());
    }

private:
    template <class T>
    T convert(const json& v, const std::string& key) const {
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw ConfigError(path(key) + " must be a number");
            }
            return v.get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(path(key) + ": " + e.what());
        }
    }

    const json& j_;
    std::string where_;
    std::set<std::string> used_;
};

geometry::Vec2 vec2(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(where + " must be a pair of numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

const json& empty_object() {
    static const json e = json::object();
    return e;
}

void agree(bool both, bool equal, const std::string& what) {
    if (both && !equal) throw ConfigError("scenario." + what + " disagrees with the value given elsewhere");
}

PoissonMethod poisson_method(const std::string& name) {
    if (name == "spectral") return PoissonMethod::spectral;
    if (name == "cg" || name == "conjugate_gradient") return PoissonMethod::conjugate_gradient;
    throw ConfigError("solver.poisson.method must be \"spectral\" or \"cg\", got \"" + name + "\"");
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

RunConfig parse_run_config(const json& j, bool allow_exploratory) {
    RunConfig cfg;
    cfg.allow_exploratory = allow_exploratory;
    Block root(j, "config");

    {
        const json* gj = root.find("grid");
        if (!gj) throw ConfigError("config.grid is required");
        Block g(*gj, "grid");
        const int nx = g.require<int>("nx");
        const int ny = g.get<int>("ny", nx);
        const double Lx = g.get<double>("Lx", 1.0);
        const double Ly = g.get<double>("Ly", Lx * ny / std::max(nx, 1));
        const BoundaryMode bc = boundary_mode_from_string(g.get<std::string>("bc", "dirichlet_wall"));
        g.finish();
        cfg.grid = Grid2D::make(nx, ny, Lx, Ly, bc);
    }

    // scenario first so that its aliases can fill the other blocks
    std::optional<double> alias_radius;
    std::optional<geometry::Vec2> alias_center, alias_velocity;
    std::optional<DensityPair> alias_densities;
    if (const json* sj = root.find("scenario")) {
        Block s(*sj, "scenario");
        try {
            cfg.scenario = scenario_type_from_string(s.get<std::string>("type", "static_bubble"));
        } catch (const UnsupportedScenarioError& e) {
            throw ConfigError(e.what());
        }
        if (const json* r = s.find("R")) alias_radius = r->get<double>();
        if (const json* c = s.find("center")) alias_center = vec2(*c, "scenario.center");
        if (const json* v = s.find("v_uniform")) alias_velocity = vec2(*v, "scenario.v_uniform");
        if (const json* d = s.find("densities")) {
            Block db(*d, "scenario.densities");
            alias_densities = DensityPair{db.require<double>("rho_plus"), db.require<double>("rho_minus")};
            db.finish();
        }
        s.finish();
    }

    {
        const json* pj = root.find("potential");
        Block p(pj ? *pj : empty_object(), "potential");
        const std::string type = p.get<std::string>("type", "quartic");
        if (type == "quartic") {
            cfg.solver.well = DoubleWell::quartic(p.get<double>("scale", 1.0));
            if (p.find("samples")) throw ConfigError("potential.samples only applies to type \"tabulated\"");
        } else if (type == "tabulated") {
            cfg.solver.well = DoubleWell::tabulated(p.require<std::vector<double>>("samples"));
        } else {
            throw ConfigError("potential.type must be \"quartic\" or \"tabulated\", got \"" + type + "\"");
        }
        const json* rp = p.find("rho_plus");
        const json* rm = p.find("rho_minus");
        DensityPair d{p.get<double>("rho_plus", 1.0), p.get<double>("rho_minus", 1.0)};
        if (alias_densities) {
            agree(rp != nullptr, d.rho_plus == alias_densities->rho_plus, "densities.rho_plus");
            agree(rm != nullptr, d.rho_minus == alias_densities->rho_minus, "densities.rho_minus");
            d = *alias_densities;
        }
        p.finish();
        cfg.densities = DensityPair::make(d.rho_plus, d.rho_minus);
    }

    const bool bubble = cfg.scenario != ScenarioType::quiescent;
    {
        const json* gj = root.find("geometry");
        Block g(gj ? *gj : empty_object(), "geometry");
        const std::string shape = g.get<std::string>("shape", "circle");
        if (shape != "circle") throw ConfigError("geometry.shape \"" + shape + "\" is not supported (only \"circle\")");
        const json* cj = g.find("center");
        const json* rj = g.find("radius");
        const json* vj = g.find("translation_velocity");
        geometry::Vec2 center = cj ? vec2(*cj, "geometry.center") : geometry::Vec2{cfg.grid.Lx / 2, cfg.grid.Ly / 2};
        double radius = rj ? g.get<double>("radius", 0.0) : 0.0;
        geometry::Vec2 velocity = vj ? vec2(*vj, "geometry.translation_velocity") : geometry::Vec2{0.0, 0.0};
        if (alias_center) {
            agree(cj != nullptr, center.x == alias_center->x && center.y == alias_center->y, "center");
            center = *alias_center;
        }
        if (alias_radius) {
            agree(rj != nullptr, radius == *alias_radius, "R");
            radius = *alias_radius;
        }
        if (alias_velocity) {
            agree(vj != nullptr, velocity.x == alias_velocity->x && velocity.y == alias_velocity->y, "v_uniform");
            velocity = *alias_velocity;
        }
        cfg.geometry.delta = g.get<double>("delta", cfg.geometry.delta);
        g.finish();
        if (!(cfg.geometry.delta > 0.0)) throw ConfigError("geometry.delta must be positive");
        if (bubble) {
            if (!rj && !alias_radius) throw ConfigError("geometry.radius is required for a bubble scenario");
            cfg.interface = geometry::AnalyticInterface::circle(center, radius, velocity);
        } else {
            cfg.interface = geometry::AnalyticInterface::circle(center, radius > 0.0 ? radius : 1.0, velocity);
        }
    }

    {
        const json* sj = root.find("solver");
        Block s(sj ? *sj : empty_object(), "solver");
        SolverParams& sp = cfg.solver;
        sp.eps = s.get<double>("eps", sp.eps);
        sp.m0 = s.get<double>("m0", sp.m0);
        sp.theta = s.get<double>("theta", sp.theta);
        sp.dt = s.get<double>("dt", sp.dt);
        sp.cfl = s.get<double>("cfl", sp.cfl);
        sp.ac_factor = s.get<double>("ac_factor", sp.ac_factor);
        sp.diffusive_factor = s.get<double>("diffusive_factor", sp.diffusive_factor);
        sp.ac_tolerance = s.get<double>("ac_tolerance", sp.ac_tolerance);
        sp.ac_max_iterations = s.get<int>("ac_max_iterations", sp.ac_max_iterations);
        sp.divergence_tolerance = s.get<double>("divergence_tolerance", sp.divergence_tolerance);
        sp.c_bound = s.get<double>("c_bound", sp.c_bound);
        if (const json* pj = s.find("poisson")) {
            Block p(*pj, "solver.poisson");
            sp.poisson.method = poisson_method(p.get<std::string>("method", "spectral"));
            sp.poisson.tolerance = p.get<double>("tolerance", sp.poisson.tolerance);
            sp.poisson.max_iterations = p.get<int>("max_iterations", sp.poisson.max_iterations);
            p.finish();
        }
        s.finish();
    }

    {
        const json* oj = root.find("output");
        Block o(oj ? *oj : empty_object(), "output");
        OutputConfig& out = cfg.output;
        out.directory = o.get<std::string>("directory", out.directory.string());
        out.t_end = o.get<double>("t_end", out.t_end);
        out.report_interval = o.get<double>("report_interval", out.report_interval);
        out.snapshot_interval = o.get<double>("snapshot_interval", out.snapshot_interval);
        out.snapshot_fields = o.get<std::vector<std::string>>("snapshot_fields", out.snapshot_fields);
        out.identity_monitor = o.get<bool>("identity_monitor", out.identity_monitor);
        o.finish();
        static const std::set<std::string> known = {"c", "rho", "p", "vx", "vy", "mu", "chi"};
        for (const auto& f : out.snapshot_fields)
            if (!known.count(f)) throw ConfigError("output.snapshot_fields: unknown field \"" + f + "\"");
        if (!(out.t_end > 0.0) || !std::isfinite(out.t_end)) throw ConfigError("output.t_end must be positive");
        if (!(out.report_interval > 0.0) || out.report_interval > out.t_end)
            throw ConfigError("output.report_interval must lie in (0, t_end]");
        if (out.snapshot_interval < 0.0) throw ConfigError("output.snapshot_interval must be non-negative");
    }
    root.finish();

    validate(cfg.solver, cfg.grid, allow_exploratory);
    if (bubble) {
        if (cfg.scenario == ScenarioType::transported_bubble && !cfg.grid.periodic())
            throw ConfigError("transported_bubble needs a periodic grid");
        if (cfg.scenario == ScenarioType::static_bubble &&
            (cfg.interface.velocity.x != 0.0 || cfg.interface.velocity.y != 0.0))
            throw ConfigError("static_bubble needs translation_velocity = [0, 0]");
        geometry::require_margin(cfg.interface, cfg.geometry, cfg.grid.Lx, cfg.grid.Ly, cfg.grid.periodic(), 0.0,
                                 cfg.output.t_end);
    } else if (cfg.interface.velocity.x != 0.0 || cfg.interface.velocity.y != 0.0) {
        throw ConfigError("quiescent scenario needs translation_velocity = [0, 0]");
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, bool allow_exploratory) {
    return parse_run_config(read_json_file(path), allow_exploratory);
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    using oj = nlohmann::ordered_json;
    oj potential = {{"type", c.solver.well.name()}};
    if (c.solver.well.is_quartic()) {
        potential["scale"] = c.solver.well.quartic_scale();
    } else {
        potential["samples"] = c.solver.well.samples();
    }
    potential["rho_plus"] = c.densities.rho_plus;
    potential["rho_minus"] = c.densities.rho_minus;
    const SolverParams& s = c.solver;
    return oj{
        {"grid", {{"nx", c.grid.nx}, {"ny", c.grid.ny}, {"Lx", c.grid.Lx}, {"Ly", c.grid.Ly}, {"bc", to_string(c.grid.bc)}}},
        {"geometry",
         {{"shape", "circle"},
          {"center", {c.interface.center.x, c.interface.center.y}},
          {"radius", c.interface.radius},
          {"translation_velocity", {c.interface.velocity.x, c.interface.velocity.y}},
          {"delta", c.geometry.delta}}},
        {"potential", potential},
        {"scenario", {{"type", to_string(c.scenario)}}},
        {"solver",
         {{"eps", s.eps},
          {"m0", s.m0},
          {"theta", s.theta},
          {"dt", s.dt},
          {"cfl", s.cfl},
          {"ac_factor", s.ac_factor},
          {"diffusive_factor", s.diffusive_factor},
          {"ac_tolerance", s.ac_tolerance},
          {"ac_max_iterations", s.ac_max_iterations},
          {"divergence_tolerance", s.divergence_tolerance},
          {"c_bound", s.c_bound},
          {"poisson",
           {{"method", s.poisson.method == PoissonMethod::spectral ? "spectral" : "cg"},
            {"tolerance", s.poisson.tolerance},
            {"max_iterations", s.poisson.max_iterations}}}}},
        {"output",
         {{"directory", c.output.directory.string()},
          {"t_end", c.output.t_end},
          {"report_interval", c.output.report_interval},
          {"snapshot_interval", c.output.snapshot_interval},
          {"snapshot_fields", c.output.snapshot_fields},
          {"identity_monitor", c.output.identity_monitor}}},
    };
}

SweepSpec parse_sweep_spec(const json& j, bool allow_exploratory, const std::filesystem::path& origin) {
    SweepSpec spec;
    spec.allow_exploratory = allow_exploratory;
    Block b(j, "sweep");
    spec.name = b.get<std::string>("name", spec.name);
    const json* base = b.find("base");
    const json* base_path = b.find("base_config");
    if ((base != nullptr) == (base_path != nullptr)) throw ConfigError("sweep needs exactly one of base / base_config");
    if (base) {
        spec.base = *base;
    } else {
        std::filesystem::path p = base_path->get<std::string>();
        if (p.is_relative() && !origin.empty()) p = origin / p;
        spec.base = read_json_file(p);
    }
    spec.eps = b.require<std::vector<double>>("eps");
    spec.grids = b.require<std::vector<int>>("grids");
    spec.theta = b.get<std::vector<double>>("theta", spec.theta);
    spec.t_end = b.get<double>("t_end", spec.t_end);
    spec.report_interval = b.get<double>("report_interval", spec.report_interval);
    spec.output = b.get<std::string>("output", spec.output.string());
    spec.mesh_refinement = b.get<bool>("mesh_refinement", spec.mesh_refinement);
    spec.snapshots = b.get<bool>("snapshots", spec.snapshots);
    b.finish();

    if (spec.eps.empty() || spec.theta.empty()) throw ConfigError("sweep.eps and sweep.theta must be nonempty");
    if (spec.grids.size() != spec.eps.size()) throw ConfigError("sweep.grids must pair one grid size with each eps");
    for (std::size_t i = 1; i < spec.eps.size(); ++i)
        if (!(spec.eps[i] < spec.eps[i - 1])) throw ConfigError("sweep.eps must be strictly decreasing");
    if (!spec.base.is_object()) throw ConfigError("sweep base config must be a JSON object");

    // Validate every member now so that a bad spec fails before any run.
    for (double theta : spec.theta)
        for (std::size_t i = 0; i < spec.eps.size(); ++i) member_config(spec, spec.eps[i], spec.grids[i], theta, ".");
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path, bool allow_exploratory) {
    return parse_sweep_spec(read_json_file(path), allow_exploratory, path.parent_path());
}

RunConfig member_config(const SweepSpec& spec, double eps, int n, double theta,
                        const std::filesystem::path& directory) {
    json j = spec.base;
    json& grid = j["grid"];
    if (!grid.is_object()) throw ConfigError("sweep base config needs a grid block");
    const double Lx = grid.value("Lx", 1.0);
    const double Ly = grid.value("Ly", Lx);
    grid["nx"] = n;
    grid["ny"] = static_cast<int>(std::lround(n * Ly / Lx));
    j["solver"]["eps"] = eps;
    j["solver"]["theta"] = theta;
    json& out = j["output"];
    out["directory"] = directory.string();
    out["t_end"] = spec.t_end;
    out["report_interval"] = spec.report_interval;
    if (!spec.snapshots) out["snapshot_fields"] = json::array();
    return parse_run_config(j, spec.allow_exploratory);
}

}  // namespace nsac
