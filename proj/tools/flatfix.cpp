#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flatfix/cli/commands.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> out, map;
    std::optional<int> k0, kmax;
    std::optional<double> grid_step, tol;
    std::vector<double> eps_list;
    std::optional<std::uint64_t> seed;
    bool mutate = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--k0", o.k0, "first dyadic level");
    cmd->add_option("--kmax", o.kmax, "deepest dyadic level");
    cmd->add_option("--grid-step", o.grid_step, "detector grid step");
    cmd->add_option("--tol", o.tol, "residual tolerance");
    cmd->add_option("--eps-list", o.eps_list, "translation amounts, strictly increasing")->delimiter(',');
    cmd->add_option("--map", o.map, "map name");
    cmd->add_option("--seed", o.seed, "quasi-random sampling offset");
}

flatfix::cli::RunConfig resolve(const Overrides& o) {
    flatfix::cli::RunConfig cfg = o.config.empty() ? flatfix::cli::RunConfig{} : flatfix::cli::load_config(o.config);
    if (o.out) cfg.output_dir = *o.out;
    if (o.map) cfg.map = *o.map;
    if (o.k0) cfg.k0 = *o.k0;
    if (o.kmax) cfg.k_max = *o.kmax;
    if (o.grid_step) cfg.grid_step = *o.grid_step;
    if (o.tol) cfg.tol = *o.tol;
    if (!o.eps_list.empty()) cfg.eps_list = o.eps_list;
    if (o.seed) cfg.seed = *o.seed;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    namespace fc = flatfix::cli;
    CLI::App app{"Numerical experiments on flat area-preserving annulus maps"};
    app.require_subcommand(1);
    Overrides o;
    auto* build = app.add_subcommand("build", "build the counterexample and write its map card");
    auto* sweep = app.add_subcommand("sweep", "fixed-point sweep over translation amounts");
    auto* verify = app.add_subcommand("verify", "run every invariant suite");
    auto* brouwer = app.add_subcommand("brouwer", "Brouwer-line construction on a catalog map");
    auto* plot = app.add_subcommand("plot", "plot the CSV files of an output directory");
    for (auto* c : {build, sweep, verify, brouwer, plot}) add_common(c, o);
    verify->add_flag("--mutate-gradient", o.mutate, "negate the counterexample gradient (must fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fc::exit_config;
    }
    try {
        const auto cfg = resolve(o);
        if (build->parsed()) return fc::cmd_build(cfg, std::cout);
        if (sweep->parsed()) return fc::cmd_sweep(cfg, std::cout);
        if (verify->parsed()) return fc::cmd_verify(cfg, std::cout, o.mutate);
        if (brouwer->parsed()) return fc::cmd_brouwer(cfg, std::cout);
        return fc::cmd_plot(cfg, std::cout);
    } catch (const flatfix::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return fc::exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fc::exit_check_failed;
    }
}
