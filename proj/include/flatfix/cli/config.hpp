#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatfix/core/errors.hpp"

namespace flatfix::cli {

// Parameters shared by all commands. A JSON config file supplies defaults,
// command-line flags override keys one to one.
struct RunConfig {
    int k0 = 4;
    int k_max = 24;
    double grid_step = 1.0 / 1200;
    double tol = 1e-10;
    std::vector<double> eps_list;  // empty: command default
    std::string map = "counterexample";
    std::uint64_t seed = 0;
    std::string output_dir = "out";

    void validate() const {
        if (k0 < 1) throw ConfigError("k0 must be a positive integer");
        if (k_max < k0 + 2) throw ConfigError("kmax must be at least k0 + 2");
        if (!(grid_step > 0)) throw ConfigError("grid-step must be positive");
        if (!(tol > 0)) throw ConfigError("tol must be positive");
        for (std::size_t i = 1; i < eps_list.size(); ++i)
            if (!(eps_list[i] > eps_list[i - 1])) throw ConfigError("eps-list must be strictly increasing");
        if (output_dir.empty()) throw ConfigError("output directory must not be empty");
    }

    nlohmann::json to_json() const {
        return {{"k0", k0},     {"kmax", k_max}, {"grid_step", grid_step},  {"tol", tol},
                {"eps_list", eps_list}, {"map", map}, {"seed", seed}, {"out", output_dir}};
    }
};

inline void apply_json(RunConfig& cfg, const nlohmann::json& j) {
    static const char* known[] = {"k0", "kmax", "grid_step", "tol", "eps_list", "map", "seed", "out"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown config key '" + key + "'");
    }
    try {
        if (j.contains("k0")) cfg.k0 = j.at("k0").get<int>();
        if (j.contains("kmax")) cfg.k_max = j.at("kmax").get<int>();
        if (j.contains("grid_step")) cfg.grid_step = j.at("grid_step").get<double>();
        if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
        if (j.contains("eps_list")) cfg.eps_list = j.at("eps_list").get<std::vector<double>>();
        if (j.contains("map")) cfg.map = j.at("map").get<std::string>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) cfg.output_dir = j.at("out").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    RunConfig cfg;
    try {
        apply_json(cfg, nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return cfg;
}

// Creates the directory if needed and checks that a file can be written there.
inline void ensure_writable(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    const auto probe = dir / ".write-probe";
    {
        std::ofstream out(probe);
        if (!out) throw ConfigError("output directory " + dir.string() + " is not writable");
    }
    std::filesystem::remove(probe, ec);
}

} // namespace flatfix::cli
