#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "flatfix/cli/commands.hpp"

using namespace flatfix;
using namespace flatfix::cli;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("flatfix_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Config, Validation) {
    RunConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.k_max = cfg.k0 + 1;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.eps_list = {0.1, 0.05};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.tol = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, JsonKeysOverride) {
    RunConfig cfg;
    apply_json(cfg, nlohmann::json{{"k0", 5}, {"kmax", 12}, {"map", "shear"}, {"eps_list", {0.01, 0.02}}});
    EXPECT_EQ(cfg.k0, 5);
    EXPECT_EQ(cfg.k_max, 12);
    EXPECT_EQ(cfg.map, "shear");
    EXPECT_EQ(cfg.eps_list.size(), 2u);
    EXPECT_THROW(apply_json(cfg, nlohmann::json{{"colour", 1}}), ConfigError);
    EXPECT_THROW(apply_json(cfg, nlohmann::json{{"k0", "four"}}), ConfigError);
}

TEST(Io, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Io, SweepCsvSchema) {
    dynamics::SweepResult<long double> res;
    res.epsilon_grid = {0.5L};
    dynamics::SweepEntry<long double> e;
    e.epsilon = 0.5L;
    dynamics::DisplacementCertificate<long double> c;
    c.min_displacement = 0.25L;
    c.grid_step = 0.125L;
    c.certified_margin = 0.1L;
    e.certificate = c;
    res.entries.push_back(e);
    EXPECT_EQ(sweep_csv(res), "epsilon,status,x,y,residual,index,min_displacement,grid_step\n0.5,empty,,,,,0.25,0.125\n");
}

TEST(Commands, BuildIsDeterministic) {
    RunConfig cfg;
    cfg.output_dir = scratch_dir("build").string();
    std::ostringstream log;
    ASSERT_EQ(cmd_build(cfg, log), exit_ok) << log.str();
    const std::string first = slurp(std::filesystem::path(cfg.output_dir) / "map_card.json");
    ASSERT_EQ(cmd_build(cfg, log), exit_ok);
    EXPECT_EQ(first, slurp(std::filesystem::path(cfg.output_dir) / "map_card.json"));
    const auto card = nlohmann::json::parse(first);
    EXPECT_EQ(card["levels"].size(), static_cast<std::size_t>(cfg.k_max - cfg.k0 + 1));
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(cfg.output_dir) / "manifest.json"));
}

TEST(Commands, ManifestListsEveryFileWithDigest) {
    RunConfig cfg;
    cfg.map = "translation";
    cfg.output_dir = scratch_dir("manifest").string();
    std::ostringstream log;
    ASSERT_EQ(cmd_brouwer(cfg, log), exit_ok) << log.str();
    const auto dir = std::filesystem::path(cfg.output_dir);
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    std::size_t listed = 0;
    for (const auto& f : m["files"]) {
        EXPECT_EQ(f["sha256"].get<std::string>(), sha256_hex(slurp(dir / f["file"].get<std::string>())));
        ++listed;
    }
    std::size_t on_disk = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) on_disk += e.path().filename() != "manifest.json";
    EXPECT_EQ(listed, on_disk);
}

TEST(Commands, BrouwerExitCodes) {
    RunConfig cfg;
    std::ostringstream log;
    cfg.output_dir = scratch_dir("tangent").string();
    cfg.map = "tangent-shift";
    EXPECT_EQ(cmd_brouwer(cfg, log), exit_ambiguous);
    cfg.map = "no-such-map";
    EXPECT_THROW(cmd_brouwer(cfg, log), ConfigError);
}

TEST(Commands, ShearSweepCertificates) {
    RunConfig cfg;
    cfg.map = "shear";
    cfg.grid_step = 1.0 / 200;
    cfg.eps_list = {0.001, 0.01, 0.1};
    cfg.output_dir = scratch_dir("sweep").string();
    const auto res = run_configured_sweep(cfg);
    for (const auto& e : res.entries) {
        EXPECT_TRUE(e.records.empty());
        ASSERT_TRUE(e.certificate);
        EXPECT_GE(e.certificate->min_displacement, e.epsilon);
    }
    std::ostringstream log;
    EXPECT_EQ(cmd_sweep(cfg, log), exit_ok);
    EXPECT_EQ(cmd_plot(cfg, log), exit_ok);
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(cfg.output_dir) / "sweep_plot.svg"));
}

TEST(Commands, DefaultCounterexampleGridHasLevelsAndMidpoints) {
    construction::CounterexampleSpec<long double> spec;
    const auto grid = default_counterexample_grid(spec);
    ASSERT_EQ(grid.size(), 9u);
    for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LT(grid[i - 1], grid[i]);
    EXPECT_EQ(grid.back(), construction::predicted_fixed_data(spec, 4).epsilon);
}
