#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatfix/brouwer/pipeline.hpp"
#include "flatfix/checks/suite.hpp"
#include "flatfix/cli/config.hpp"
#include "flatfix/cli/io.hpp"
#include "flatfix/construction/counterexample.hpp"
#include "flatfix/dynamics/reference_maps.hpp"
#include "flatfix/dynamics/sweep.hpp"

namespace flatfix::cli {

enum ExitCode { exit_ok = 0, exit_config = 2, exit_check_failed = 3, exit_ambiguous = 4 };

using LD = long double;

namespace detail {

inline construction::CounterexampleSpec<LD> spec_of(const RunConfig& cfg) {
    construction::CounterexampleSpec<LD> spec;
    spec.k0 = cfg.k0;
    spec.k_max = cfg.k_max;
    spec.validate();
    return spec;
}

inline checks::SuiteConfig suite_config(const RunConfig& cfg) {
    checks::SuiteConfig sc;
    sc.k0 = cfg.k0;
    sc.grid_step = cfg.grid_step;
    sc.tol = cfg.tol;
    sc.seed = cfg.seed;
    return sc;
}

inline void print_checks(std::ostream& log, const std::vector<checks::CheckResult>& rs) {
    for (const auto& r : rs)
        log << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name << (r.resolution_limited ? " [resolution-limited]" : "")
            << " (" << r.detail << ")\n";
}

inline dynamics::LiftMap<LD> sweep_map(const RunConfig& cfg) {
    if (cfg.map == "counterexample") return construction::build_annulus_map(spec_of(cfg));
    for (const char* n : {"identity", "shear", "twist"})
        if (cfg.map == n) return dynamics::reference_map<LD>(n);
    throw ConfigError("sweep: unknown map '" + cfg.map + "' (counterexample, identity, shear, twist)");
}

} // namespace detail

// Predicted eps_k for k = k0..k0+4 with the midpoints between consecutive
// levels, ascending.
inline std::vector<LD> default_counterexample_grid(const construction::CounterexampleSpec<LD>& spec) {
    std::vector<LD> levels;
    for (int k = spec.k0; k <= std::min(spec.k0 + 4, spec.k_max); ++k)
        levels.push_back(construction::predicted_fixed_data(spec, k).epsilon);
    std::vector<LD> grid;
    for (std::size_t i = levels.size(); i-- > 0;) {
        grid.push_back(levels[i]);
        if (i > 0) grid.push_back((levels[i] + levels[i - 1]) / 2);
    }
    return grid;
}

// Zero followed by 50 equally spaced values in (0, 0.1].
inline std::vector<LD> default_reference_grid() {
    std::vector<LD> grid{0};
    for (int i = 1; i <= 50; ++i) grid.push_back(LD(i) * 0.002L);
    return grid;
}

inline nlohmann::json map_card(const construction::CounterexampleSpec<LD>& spec) {
    nlohmann::json rows = nlohmann::json::array();
    for (int k = spec.k0; k <= spec.k_max; ++k) {
        const auto pd = construction::predicted_fixed_data(spec, k);
        const LD log_eps = spec.k0 * std::log(LD(2)) +
                           construction::FlatFunction<LD>::log_prime(3 * std::ldexp(LD(1), -(k + 2)));
        rows.push_back({{"k", k},
                        {"epsilon", fmt_num(pd.epsilon)},
                        {"log_epsilon", fmt_num(log_eps)},
                        {"x", fmt_num(pd.point.x)},
                        {"y", fmt_num(pd.point.y)}});
    }
    return {{"map", "counterexample"}, {"k0", spec.k0}, {"kmax", spec.k_max}, {"levels", rows}};
}

inline int cmd_build(const RunConfig& cfg, std::ostream& log) {
    const std::string started = utc_timestamp();
    const auto spec = detail::spec_of(cfg);
    try {
        construction::build_annulus_map(spec);
    } catch (const ContractionFailure& e) {
        throw ConfigError(std::string(e.what()));
    } catch (const GluingMismatch& e) {
        throw ConfigError(std::string(e.what()));
    }
    ensure_writable(cfg.output_dir);
    OutputDir out(cfg.output_dir);
    const auto suite = checks::construction_suite(detail::suite_config(cfg));
    detail::print_checks(log, suite);
    out.write("map_card.json", map_card(spec).dump(2) + "\n");
    out.write("construction_checks.json", checks::to_json(suite).dump(2) + "\n");
    out.write_manifest("build", cfg.to_json(), checks::to_json(suite), started);
    log << "map card written to " << (out.path() / "map_card.json").string() << "\n";
    return checks::all_passed(suite) ? exit_ok : exit_check_failed;
}

inline dynamics::SweepResult<LD> run_configured_sweep(const RunConfig& cfg) {
    const auto f = detail::sweep_map(cfg);
    std::vector<LD> grid;
    if (!cfg.eps_list.empty()) grid.assign(cfg.eps_list.begin(), cfg.eps_list.end());
    else if (cfg.map == "counterexample") grid = default_counterexample_grid(detail::spec_of(cfg));
    else grid = default_reference_grid();
    dynamics::SweepOptions<LD> opt;
    opt.window = {-0.5L, 0.5L, 1e-4L, 1};
    opt.grid_step = cfg.grid_step;
    opt.tol = cfg.tol;
    return dynamics::run_sweep(f, grid, opt);
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    const std::string started = utc_timestamp();
    ensure_writable(cfg.output_dir);
    const auto res = run_configured_sweep(cfg);
    OutputDir out(cfg.output_dir);
    out.write("sweep.csv", sweep_csv(res));
    out.write("sweep.svg", sweep_svg(res, cfg.map + " sweep"));
    std::size_t fixed = 0, empty = 0, ambiguous = 0;
    for (const auto& e : res.entries) {
        fixed += !e.records.empty();
        if (e.certificate) (e.certificate->certified() ? empty : ambiguous) += 1;
    }
    log << cfg.map << ": " << res.entries.size() << " epsilon values, " << fixed << " with fixed points, " << empty
        << " certified empty, " << ambiguous << " uncertified\n"
        << "emptiness certificates are sampled evidence, not proofs\n";
    const nlohmann::json summary = {{"fixed", fixed}, {"empty", empty}, {"ambiguous", ambiguous}};
    out.write_manifest("sweep", cfg.to_json(), summary, started);
    return exit_ok;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& log, bool mutate_gradient = false) {
    const std::string started = utc_timestamp();
    ensure_writable(cfg.output_dir);
    auto sc = detail::suite_config(cfg);
    sc.flip_gradient_sign = mutate_gradient;
    const auto rs = checks::run_all(sc);
    detail::print_checks(log, rs);
    OutputDir out(cfg.output_dir);
    const nlohmann::json report = {{"passed", checks::all_passed(rs)}, {"mutated_gradient", mutate_gradient},
                                   {"checks", checks::to_json(rs)}};
    out.write("verify.json", report.dump(2) + "\n");
    out.write_manifest("verify", cfg.to_json(), checks::to_json(rs), started);
    return checks::all_passed(rs) ? exit_ok : exit_check_failed;
}

inline int cmd_brouwer(const RunConfig& cfg, std::ostream& log) {
    const std::string started = utc_timestamp();
    const auto names = brouwer::catalog_names<double>();
    if (std::find(names.begin(), names.end(), cfg.map) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        throw ConfigError("brouwer: unknown catalog map '" + cfg.map + "' (" + list + ")");
    }
    ensure_writable(cfg.output_dir);
    const auto rep = brouwer::run_brouwer_pipeline<double>(cfg.map);

    std::vector<NamedPolyline> curves = {named("AB", rep.AB), named("BC", rep.BC), named("L1", rep.L1.path)};
    if (rep.L2) curves.push_back(named("L2", rep.L2->path));
    OutputDir out(cfg.output_dir);
    out.write("polylines.csv", polylines_csv(curves));
    out.write("brouwer.svg", polylines_svg(curves, -4, 4, -4, 4, cfg.map));

    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : rep.L1.events)
        events.push_back({{"vertical", e.vertical}, {"arc", e.arc}, {"side", brouwer::to_string(e.side)}});
    nlohmann::json j = {{"map", cfg.map},
                        {"verdict", brouwer::to_string(rep.verdict)},
                        {"message", rep.message},
                        {"L1", {{"success", rep.L1.success},
                                {"termination", brouwer::to_string(rep.L1.termination)},
                                {"failure", brouwer::to_string(rep.L1.failure)},
                                {"message", rep.L1.message},
                                {"failing_step", rep.L1.failing_step},
                                {"events", events},
                                {"disjoint", rep.L1_disjoint}}}};
    if (rep.L2) j["L2"] = {{"success", rep.L2->success}, {"termination", brouwer::to_string(rep.L2->termination)}};
    for (const auto& [key, v] : {std::pair{"coarse", rep.coarse}, std::pair{"fine", rep.fine}})
        if (v) j[key] = {{"passed", v->passed()}, {"resolution", v->resolution}, {"samples", v->samples}, {"detail", v->detail}};
    j["periodicity"] = rep.periodicity ? nlohmann::json{{"N", rep.periodicity->N},
                                                        {"single_point_overlap", rep.periodicity->single_point_overlap}}
                                       : nlohmann::json(nullptr);
    if (rep.crossings) j["crossings_on_V0"] = rep.crossings->w.size();
    out.write("brouwer.json", j.dump(2) + "\n");
    out.write_manifest("brouwer", cfg.to_json(), {{"verdict", brouwer::to_string(rep.verdict)}}, started);

    log << cfg.map << ": " << brouwer::to_string(rep.verdict) << " (" << rep.message << ")\n";
    switch (rep.verdict) {
        case brouwer::Verdict::verified: return exit_ok;
        case brouwer::Verdict::ambiguous: return exit_ambiguous;
        default: return exit_check_failed;
    }
}

namespace detail {

inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("plot: cannot read " + p.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
        rows.push_back(cols);
    }
    return rows;
}

} // namespace detail

// Renders plots from the CSV files present in the output directory. New
// file names keep the digests in an existing manifest valid.
inline int cmd_plot(const RunConfig& cfg, std::ostream& log) {
    const std::filesystem::path dir = cfg.output_dir;
    bool any = false;
    std::ostringstream done;
    if (std::filesystem::exists(dir / "sweep.csv")) {
        dynamics::SweepResult<LD> res;
        for (const auto& row : detail::read_csv(dir / "sweep.csv")) {
            if (row.size() < 2) continue;
            const LD eps = std::strtold(row[0].c_str(), nullptr);
            if (res.epsilon_grid.empty() || res.epsilon_grid.back() != eps) {
                res.epsilon_grid.push_back(eps);
                res.entries.push_back({eps, {}, std::nullopt, false});
            }
            auto& e = res.entries.back();
            if (row[1] == "fixed" && row.size() >= 4) {
                dynamics::FixedPointRecord<LD> rec;
                rec.epsilon = eps;
                rec.location = {std::strtold(row[2].c_str(), nullptr), std::strtold(row[3].c_str(), nullptr)};
                e.records.push_back(rec);
            } else {
                e.certificate = dynamics::DisplacementCertificate<LD>{};
            }
        }
        std::ofstream(dir / "sweep_plot.svg") << sweep_svg(res, "sweep");
        done << " sweep_plot.svg";
        any = true;
    }
    if (std::filesystem::exists(dir / "polylines.csv")) {
        std::vector<NamedPolyline> curves;
        for (const auto& row : detail::read_csv(dir / "polylines.csv")) {
            if (row.size() < 4) continue;
            if (curves.empty() || curves.back().name != row[0]) curves.push_back({row[0], {}});
            curves.back().points.emplace_back(std::strtod(row[2].c_str(), nullptr), std::strtod(row[3].c_str(), nullptr));
        }
        std::ofstream(dir / "brouwer_plot.svg") << polylines_svg(curves, -4, 4, -4, 4, "Brouwer construction");
        done << " brouwer_plot.svg";
        any = true;
    }
    if (!any) throw ConfigError("plot: no sweep.csv or polylines.csv in " + dir.string());
    log << "wrote" << done.str() << "\n";
    return exit_ok;
}

} // namespace flatfix::cli
