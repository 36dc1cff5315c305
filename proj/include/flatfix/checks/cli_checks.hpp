#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "flatfix/checks/result.hpp"
#include "flatfix/cli/io.hpp"
#include "flatfix/dynamics/reference_maps.hpp"
#include "flatfix/dynamics/sweep.hpp"

namespace flatfix::checks {

inline std::vector<CheckResult> cli_suite(const SuiteConfig& cfg) {
    using LD = long double;
    std::vector<CheckResult> out;
    dynamics::SweepOptions<LD> opt;
    opt.window = {0, 1, 0.005L, 0.05L};
    opt.grid_step = LD(cfg.grid_step);
    opt.tol = LD(cfg.tol);
    const std::vector<LD> grid = {-0.01L, 0, 0.01L, 0.05L};
    try {
        const auto a = dynamics::run_sweep(dynamics::shear_map<LD>(), grid, opt);
        const auto b = dynamics::run_sweep(dynamics::shear_map<LD>(), grid, opt);
        const std::string ca = cli::sweep_csv(a), cb = cli::sweep_csv(b);
        out.push_back({"cli", "sweep CSV deterministic", ca == cb, false, a.entries.size(), 0,
                       ca == cb ? "byte-identical" : "outputs differ"});

        CheckResult r{"cli", "every sweep row has a record or a certificate"};
        std::size_t bad = 0;
        for (const auto& e : a.entries) {
            ++r.samples;
            if (e.records.empty() && !e.certificate) ++bad;
        }
        std::istringstream lines(ca);
        std::string line;
        std::getline(lines, line);
        while (std::getline(lines, line)) {
            std::vector<std::string> cols;
            std::stringstream ls(line);
            for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
            cols.resize(8);
            const bool fixed = cols[1] == "fixed" && !cols[2].empty() && !cols[3].empty() && !cols[4].empty();
            const bool cert = (cols[1] == "empty" || cols[1] == "ambiguous") && !cols[6].empty();
            if (!fixed && !cert) ++bad;
        }
        r.passed = bad == 0;
        r.detail = std::to_string(bad) + " rows without a record or certificate";
        out.push_back(r);
    } catch (const std::exception& e) {
        out.push_back({"cli", "sweep CSV", false, false, 0, 0, std::string("error: ") + e.what()});
    }
    return out;
}

} // namespace flatfix::checks
