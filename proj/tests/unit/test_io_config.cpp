#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "nsac/config.hpp"
#include "nsac/errors.hpp"
#include "nsac/io.hpp"

using namespace nsac;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nsac_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json bubble_config() { return read_json_file(fs::path(NSAC_CONFIG_DIR) / "static_bubble.json"); }

std::string config_error(const json& j, bool exploratory = false) {
    try {
        parse_run_config(j, exploratory);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Snapshot, RoundTripIsBitExact) {
    const fs::path dir = scratch("snapshot");
    const Grid2D g = Grid2D::make(32, 16, 2.0, 1.0, BoundaryMode::periodic);
    const auto f = ScalarField::from_function(g, [](double x, double y) { return std::sin(7 * x) / (1 + y) + 1e-300; });
    write_snapshot(dir, "c_0003", f, 0.125);
    EXPECT_EQ(fs::file_size(dir / "c_0003.bin"), g.size() * sizeof(double));
    SnapshotMeta meta;
    const ScalarField back = read_snapshot(dir / "c_0003.bin", &meta);
    EXPECT_EQ(meta.name, "c_0003");
    EXPECT_EQ(meta.t, 0.125);
    EXPECT_EQ(meta.nx, 32);
    EXPECT_EQ(meta.ny, 16);
    EXPECT_EQ(meta.Lx, 2.0);
    EXPECT_EQ(meta.bc, BoundaryMode::periodic);
    ASSERT_EQ(back.size(), f.size());
    for (std::size_t k = 0; k < f.size(); ++k) ASSERT_EQ(back[k], f[k]);
}

TEST(Snapshot, RowMajorXFastestLayout) {
    const fs::path dir = scratch("layout");
    const Grid2D g = Grid2D::make(16, 16, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    ScalarField f(g);
    f(3, 0) = 1.0;
    f(0, 2) = 2.0;
    write_snapshot(dir, "rho_0000", f, 0.0);
    std::ifstream in(dir / "rho_0000.bin", std::ios::binary);
    std::vector<double> raw(g.size());
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(double)));
    EXPECT_EQ(raw[3], 1.0);
    EXPECT_EQ(raw[2 * 16], 2.0);
    const json sidecar = read_json_file(dir / "rho_0000.json");
    for (const char* key : {"name", "t", "nx", "ny", "Lx", "Ly", "bc"}) EXPECT_TRUE(sidecar.contains(key)) << key;
}

TEST(Snapshot, MissingOrInconsistentSidecar) {
    const fs::path dir = scratch("broken");
    const Grid2D g = Grid2D::make(16, 16, 1.0, 1.0, BoundaryMode::dirichlet_wall);
    write_snapshot(dir, "p_0001", ScalarField(g, 1.0), 0.0);
    fs::remove(dir / "p_0001.json");
    EXPECT_THROW(read_snapshot(dir / "p_0001.bin"), ConfigError);
    write_snapshot(dir, "p_0002", ScalarField(g, 1.0), 0.0);
    fs::resize_file(dir / "p_0002.bin", 100);
    EXPECT_THROW(read_snapshot(dir / "p_0002.bin"), ConfigError);
}

TEST(Csv, WriteAndReadBack) {
    const fs::path dir = scratch("csv");
    {
        CsvWriter w(dir / "t.csv", {"t", "E", "flag"});
        w.row({0.0, 0.1, 1.0});
        w.row({0.01, std::numeric_limits<double>::quiet_NaN(), 0.0});
        EXPECT_THROW(w.row({1.0}), std::invalid_argument);
    }
    const CsvTable t = read_csv(dir / "t.csv");
    ASSERT_EQ(t.columns.size(), 3u);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.column("E")[0], 0.1);
    EXPECT_TRUE(std::isnan(t.column("E")[1]));
    EXPECT_TRUE(t.has_column("flag"));
    EXPECT_THROW(t.column("missing"), ConfigError);
}

TEST(Csv, ShortestRoundTripFormatting) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
    const double x = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Config, ShippedConfigurationsParse) {
    for (const char* name : {"static_bubble.json", "quiescent.json", "transported_bubble.json"})
        EXPECT_NO_THROW(load_run_config(fs::path(NSAC_CONFIG_DIR) / name)) << name;
}

TEST(Config, CanonicalFormRoundTrips) {
    const RunConfig a = parse_run_config(bubble_config());
    const json once = to_json(a);
    const RunConfig b = parse_run_config(json::parse(once.dump()));
    EXPECT_EQ(json::parse(once.dump()), json::parse(to_json(b).dump()));
    EXPECT_EQ(b.grid, a.grid);
    EXPECT_EQ(b.solver.eps, 0.04);
    EXPECT_EQ(b.geometry.delta, 0.08);
}

TEST(Config, ThetaOutsideWindowCitesTheWindow) {
    json j = bubble_config();
    j["solver"]["theta"] = 2.0;
    EXPECT_NE(config_error(j).find("-1/4 < theta <= 1"), std::string::npos);
    EXPECT_EQ(config_error(j, true), "");
}

TEST(Config, UnknownKeysAreRejected) {
    json j = bubble_config();
    j["solver"]["viscosity"] = 2.0;
    EXPECT_NE(config_error(j).find("viscosity"), std::string::npos);
    json k = bubble_config();
    k["extra"] = 1;
    EXPECT_NE(config_error(k), "");
}

TEST(Config, InconsistentScenarioAliasesAreRejected) {
    json j = bubble_config();
    j["scenario"]["R"] = 0.2;
    EXPECT_NE(config_error(j), "");
    j["scenario"]["R"] = 0.25;
    EXPECT_EQ(config_error(j), "");
}

TEST(Config, PhysicalGuards) {
    json margin = bubble_config();
    margin["geometry"]["delta"] = 0.1;
    EXPECT_NE(config_error(margin), "");
    json resolution = bubble_config();
    resolution["grid"]["nx"] = resolution["grid"]["ny"] = 64;
    EXPECT_NE(config_error(resolution).find("resolution guard"), std::string::npos);
    json moving = bubble_config();
    moving["geometry"]["translation_velocity"] = {1.0, 0.0};
    EXPECT_NE(config_error(moving), "");
    json transported = bubble_config();
    transported["scenario"]["type"] = "transported_bubble";
    EXPECT_NE(config_error(transported), "");
    json density = bubble_config();
    density["potential"]["rho_plus"] = -1.0;
    EXPECT_NE(config_error(density), "");
}

TEST(SweepSpec, ParsesAndBuildsMembers) {
    const json spec = {{"name", "demo"},
                       {"base_config", "static_bubble.json"},
                       {"eps", {0.08, 0.04}},
                       {"grids", {64, 128}},
                       {"theta", {0.0, 0.5}},
                       {"t_end", 0.02},
                       {"output", "out"}};
    const SweepSpec s = parse_sweep_spec(spec, false, NSAC_CONFIG_DIR);
    EXPECT_EQ(s.eps.size(), 2u);
    EXPECT_EQ(s.theta.size(), 2u);
    const RunConfig m = member_config(s, 0.04, 128, 0.5, "member");
    EXPECT_EQ(m.grid.nx, 128);
    EXPECT_EQ(m.solver.eps, 0.04);
    EXPECT_EQ(m.solver.theta, 0.5);
    EXPECT_EQ(m.output.t_end, 0.02);
    EXPECT_EQ(m.output.directory, fs::path("member"));
}

TEST(SweepSpec, RejectsMalformedSweeps) {
    const json base = {{"base_config", "static_bubble.json"}, {"eps", {0.08, 0.04}}, {"grids", {64, 128}}};
    EXPECT_NO_THROW(parse_sweep_spec(base, false, NSAC_CONFIG_DIR));
    json unordered = base;
    unordered["eps"] = {0.04, 0.08};
    EXPECT_THROW(parse_sweep_spec(unordered, false, NSAC_CONFIG_DIR), ConfigError);
    json unpaired = base;
    unpaired["grids"] = {64};
    EXPECT_THROW(parse_sweep_spec(unpaired, false, NSAC_CONFIG_DIR), ConfigError);
    json underresolved = base;
    underresolved["grids"] = {64, 64};
    EXPECT_THROW(parse_sweep_spec(underresolved, false, NSAC_CONFIG_DIR), ConfigError);
    json theta = base;
    theta["theta"] = {1.5};
    EXPECT_THROW(parse_sweep_spec(theta, false, NSAC_CONFIG_DIR), ConfigError);
    EXPECT_NO_THROW(parse_sweep_spec(theta, true, NSAC_CONFIG_DIR));
}
