#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsac/errors.hpp"
#include "nsac/harness.hpp"
#include "nsac/io.hpp"

using namespace nsac;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nsac_harness_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json load(const char* name) { return read_json_file(fs::path(NSAC_CONFIG_DIR) / name); }

// 32^2 walled bubble at eps = 4h, a few hundred steps
json small_bubble(const fs::path& dir, double t_end = 0.005) {
    json j = load("static_bubble.json");
    j["grid"]["nx"] = j["grid"]["ny"] = 32;
    j["solver"]["eps"] = 0.125;
    j["output"] = {{"directory", dir.string()}, {"t_end", t_end}, {"report_interval", t_end / 10},
                   {"snapshot_interval", 0.0}};
    return j;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(NSAC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_json(const fs::path& dir, const std::string& name, const json& j) {
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

}  // namespace

TEST(Harness, QuiescentRunHasZeroMonitors) {
    const fs::path dir = scratch("quiescent");
    json j = load("quiescent.json");
    j["output"]["directory"] = dir.string();
    const RunSummary s = run_simulation(parse_run_config(j));
    EXPECT_EQ(s.status, "ok");
    EXPECT_TRUE(s.clean);
    EXPECT_EQ(s.reports.size(), 11u);
    EXPECT_NEAR(s.t_final, 0.01, 1e-15);
    EXPECT_EQ(s.max_divergence, 0.0);
    EXPECT_EQ(s.rho_sup_max, s.rho_sup_initial);
    for (const EnergyReport& r : s.reports) {
        EXPECT_LE(std::abs(r.E), 1e-20);
        EXPECT_EQ(r.E_vol, 0.0);
        EXPECT_EQ(r.kinetic, 0.0);
    }
    const CsvTable mon = read_csv(dir / "monitors.csv");
    for (const char* col : {"max_velocity", "divergence_l2", "kinetic"})
        for (double v : mon.column(col)) EXPECT_EQ(v, 0.0) << col;
    for (double v : mon.column("max_abs_c")) EXPECT_EQ(v, 1.0);
    const CsvTable rep = read_csv(dir / "report.csv");
    EXPECT_EQ(rep.rows.size(), 11u);
    EXPECT_EQ(rep.columns, energy_report_columns());
    const json summary = read_json_file(dir / "summary.json");
    EXPECT_EQ(summary["schema"], "nsac-run-1");
    EXPECT_TRUE(fs::exists(dir / "config.json"));
    EXPECT_TRUE(fs::exists(dir / "c_0000.bin"));
}

TEST(Harness, RunsAreByteIdentical) {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    run_simulation(parse_run_config(small_bubble(a)));
    run_simulation(parse_run_config(small_bubble(b)));
    for (const char* f : {"report.csv", "monitors.csv", "c_0001.bin"}) {
        const std::string x = slurp(a / f);
        EXPECT_FALSE(x.empty()) << f;
        EXPECT_EQ(x, slurp(b / f)) << f;
    }
}

TEST(Harness, BubbleRunLandsOnReportTimes) {
    const fs::path dir = scratch("bubble");
    const RunSummary s = run_simulation(parse_run_config(small_bubble(dir, 0.01)));
    ASSERT_EQ(s.reports.size(), 11u);
    for (std::size_t k = 0; k < s.reports.size(); ++k) EXPECT_NEAR(s.reports[k].t, 0.001 * k, 1e-14);
    EXPECT_TRUE(s.clean);
    EXPECT_LE(s.max_abs_c, 1.05);
    EXPECT_LE(s.max_divergence, 1e-8);
    EXPECT_TRUE(std::isfinite(s.gronwall.C));
    for (const EnergyReport& r : s.reports) {
        EXPECT_GE(r.E, -1e-10);
        EXPECT_NEAR(r.E, r.E_rearranged, 1e-8 * std::abs(r.E) + 1e-12);
    }
    const CsvTable mon = read_csv(dir / "monitors.csv");
    EXPECT_TRUE(std::isnan(mon.column("identity_residual").front()));
    EXPECT_EQ(static_cast<long>(mon.rows.size()), s.steps + 1);
    EXPECT_NE(format_report(dir).find("E_vol"), std::string::npos);
}

TEST(Harness, SolverFailureIsRecordedAndRethrown) {
    const fs::path dir = scratch("abort");
    json j = load("transported_bubble.json");
    j["grid"]["nx"] = j["grid"]["ny"] = 32;
    j["solver"]["eps"] = 0.125;
    j["solver"]["dt"] = 0.05;  // violates the transport CFL bound
    j["output"] = {{"directory", dir.string()}, {"t_end", 0.1}, {"report_interval", 0.05}};
    EXPECT_THROW(run_simulation(parse_run_config(j)), CflViolationError);
    EXPECT_EQ(read_json_file(dir / "summary.json")["status"], "aborted");
}

TEST(Harness, SmallSweepWritesRates) {
    const fs::path dir = scratch("sweep");
    json spec = {{"name", "tiny"},
                 {"base_config", "static_bubble.json"},
                 {"eps", {0.25, 0.125, 0.0625}},
                 {"grids", {16, 32, 64}},
                 {"t_end", 0.002},
                 {"report_interval", 0.0002},
                 {"mesh_refinement", true},
                 {"output", dir.string()}};
    const SweepSpec s = parse_sweep_spec(spec, false, NSAC_CONFIG_DIR);
    const SweepResult r = run_sweep(s, 2);
    EXPECT_EQ(r.members.size(), 6u);
    for (const SweepMember& m : r.members) EXPECT_TRUE(m.completed) << m.note;
    ASSERT_EQ(r.fits.size(), 2u);
    for (const RateFit& f : r.fits) {
        EXPECT_EQ(f.pairs.size(), 3u);
        EXPECT_GT(f.slope, 0.0) << f.functional;
    }
    ASSERT_EQ(r.coercivity.size(), 3u);
    EXPECT_EQ(r.coercivity[0].n_fine, 2 * r.coercivity[0].n);
    const json rates = read_json_file(dir / "rates.json");
    EXPECT_EQ(rates["schema"], "nsac-rates-1");
    EXPECT_EQ(rates["fits"].size(), 2u);
    EXPECT_TRUE(fs::exists(dir / "theta_0" / "eps_0.125_n32" / "summary.json"));
    EXPECT_NE(format_report(dir).find("slope"), std::string::npos);
}

TEST(Harness, ReportOfEmptyDirectoryFails) {
    EXPECT_THROW(format_report(scratch("empty")), ConfigError);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("cli");
    EXPECT_EQ(run_cli("verify-geometry --config " + std::string(NSAC_CONFIG_DIR) + "/static_bubble.json"), 0);

    json ok = small_bubble(dir / "run", 0.002);
    EXPECT_EQ(run_cli("simulate --config " + write_json(dir, "ok.json", ok).string()), 0);
    EXPECT_EQ(run_cli("report --run-dir " + (dir / "run").string()), 0);

    json theta = ok;
    theta["solver"]["theta"] = 2.0;
    const fs::path tp = write_json(dir, "theta.json", theta);
    EXPECT_EQ(run_cli("simulate --config " + tp.string()), 2);
    EXPECT_EQ(run_cli("simulate --allow-exploratory --config " + tp.string()), 0);

    EXPECT_EQ(run_cli("simulate --config " + (dir / "missing.json").string()), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);

    json cfl = load("transported_bubble.json");
    cfl["grid"]["nx"] = cfl["grid"]["ny"] = 32;
    cfl["solver"]["eps"] = 0.125;
    cfl["solver"]["dt"] = 0.05;
    cfl["output"] = {{"directory", (dir / "cfl").string()}, {"t_end", 0.1}, {"report_interval", 0.05}};
    EXPECT_EQ(run_cli("simulate --config " + write_json(dir, "cfl.json", cfl).string()), 3);
}
