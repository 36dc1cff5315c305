// Acceptance criteria 1-9: one PASS/FAIL line each, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "flatfix/brouwer/pipeline.hpp"
#include "flatfix/checks/suite.hpp"
#include "flatfix/construction/counterexample.hpp"
#include "flatfix/dynamics/displacement.hpp"
#include "flatfix/dynamics/fixed_points.hpp"
#include "flatfix/dynamics/index.hpp"
#include "flatfix/dynamics/reference_maps.hpp"

using namespace flatfix;
using LD = long double;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string num(long double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3Lg", v);
    return buf;
}

// Fixed points at eps_k, k = 4..10, on the full window at grid 1/1200.
Outcome criterion1() {
    construction::CounterexampleSpec<LD> spec;
    const auto f = construction::build_annulus_map(spec);
    const Rect<LD> window{-0.5L, 0.5L, 1e-4L, 1};
    bool ok = true;
    LD worst_dist = 0, worst_res = 0, prev_log = INFINITY;
    for (int k = 4; k <= 10; ++k) {
        const auto pd = construction::predicted_fixed_data(spec, k);
        const LD log_eps = spec.k0 * std::log(LD(2)) +
                           construction::FlatFunction<LD>::log_prime(3 * std::ldexp(LD(1), -(k + 2)));
        if (!(pd.epsilon > 0 && log_eps < prev_log)) ok = false;
        prev_log = log_eps;
        const auto recs = dynamics::find_fixed_points(dynamics::translate_eps(f, pd.epsilon), window, LD(1) / 1200, 1e-10L);
        LD best = INFINITY, res = INFINITY;
        for (const auto& r : recs) {
            const LD d = r.distance_to(pd.point);
            if (d < best) { best = d; res = r.residual; }
        }
        if (!(best <= 1e-8L && res < 1e-10L)) ok = false;
        worst_dist = std::max(worst_dist, best);
        worst_res = std::max(worst_res, res);
    }
    return {ok, "max distance from (eps_k, 3 2^(k0-k-2)) to the detected fixed set " + num(worst_dist) +
                    ", max residual " + num(worst_res) + ", eps_k strictly decreasing"};
}

Outcome criterion2() {
    construction::CounterexampleSpec<LD> spec;
    const auto r = checks::check_area_preservation(construction::build_annulus_map(spec), 10000, 0, "counterexample");
    return {r.passed, std::to_string(r.samples) + " points, " + r.detail};
}

// grad g on y = 2^-k equals (0, h'(2^-k)); at p_k it equals (0, -h'(3 2^-(k+2))).
// Compared in log form, so levels whose gradient underflows still count.
Outcome criterion3() {
    construction::CounterexampleSpec<LD> spec;
    spec.k_max = 24;
    LD worst = 0;
    auto rel_err = [](const construction::LogGradient<LD>& got, LD log_ref, Point<LD> dir_ref) {
        return norm(std::exp(got.log_scale - log_ref) * got.direction - dir_ref);
    };
    for (int k = 4; k <= 20; ++k) {
        const LD t_top = std::ldexp(LD(1), -k), t_mid = 3 * std::ldexp(LD(1), -(k + 2));
        const LD log_top = -1 / t_top - 2 * std::log(t_top), log_mid = -1 / t_mid - 2 * std::log(t_mid);
        for (int i = 0; i <= 16; ++i) {
            const LD x = -1.0L / 32 + LD(i) / 256;
            worst = std::max(worst, rel_err(construction::g_grad_log(spec, Point<LD>{x, t_top}), log_top, {0, 1}));
        }
        worst = std::max(worst, rel_err(construction::g_grad_log(spec, construction::p_k<LD>(k)), log_mid, {0, -1}));
    }
    return {worst <= 1e-10L, "max relative error " + num(worst) + " over k = 4..20"};
}

Outcome criterion4() {
    const auto r = checks::check_scaling_law(4, 0, 1000);
    return {r.passed, std::to_string(r.samples) + " samples, " + r.detail};
}

Outcome criterion5() {
    const auto r = checks::check_gradient_decay(4);
    return {r.passed, r.detail};
}

// Shear and analytic twist over a 50-point grid in (0, 0.1]: no records and a
// positive certified displacement margin. Sampled evidence, not a proof.
Outcome criterion6() {
    bool ok = true;
    LD min_margin = INFINITY;
    const Rect<LD> window{0, 1, 1e-4L, 1};
    const LD grid = LD(1) / 256;
    for (const auto& f : {dynamics::shear_map<LD>(), dynamics::twist_map<LD>()}) {
        for (int i = 1; i <= 50; ++i) {
            const auto fe = dynamics::translate_eps(f, LD(i) * 0.002L);
            if (!dynamics::find_fixed_points(fe, window, grid, 1e-10L).empty()) ok = false;
            const auto cert = dynamics::min_displacement(fe, window, grid);
            if (!(cert.min_displacement > 0 && cert.certified())) ok = false;
            min_margin = std::min(min_margin, cert.certified_margin);
        }
    }
    return {ok, "evidence, not proof: 100 empty sweeps, least certified margin " + num(min_margin)};
}

// Shear at eps = -0.01: fixed points near y = 0.01 and a loop around them
// with nonzero index.
Outcome criterion7() {
    const auto f = dynamics::translate_eps(dynamics::shear_map<LD>(), -0.01L);
    const auto recs = dynamics::find_fixed_points(f, Rect<LD>{0, 1, 1e-4L, 1}, LD(1) / 1200, 1e-10L);
    bool found = !recs.empty();
    for (const auto& r : recs) found = found && std::abs(r.location.y - 0.01L) <= 1e-4L;
    std::string idx = "no loop";
    bool nonzero = false;
    if (!recs.empty()) {
        const Point<LD> c = recs.front().location;
        for (LD r : {1e-3L, 1e-2L}) {
            try {
                const int i = dynamics::fixed_point_index(f, make_rectangle(Rect<LD>{c.x - r, c.x + r, c.y - r, c.y + r}));
                idx = "index " + std::to_string(i);
                nonzero = nonzero || i != 0;
            } catch (const DisplacementVanishesOnLoop&) {
                idx = "displacement vanishes on every square around the record (fixed set is the circle y = 0.01)";
            }
        }
    }
    return {found && nonzero, std::to_string(recs.size()) + " records at y ~ 0.01" + (found ? "" : " (misplaced)") + "; " + idx};
}

Outcome criterion8() {
    using R = double;
    std::string d;
    bool ok = true;
    const auto tr = brouwer::run_brouwer_pipeline<R>("translation");
    const bool vertical = tr.L1.success && tr.L1.path.vertices.size() == 1 && tr.L1.path.end_ray &&
                          *tr.L1.path.end_ray == Point<R>{0, 1};
    ok = ok && vertical && tr.verdict == brouwer::Verdict::verified;
    d += std::string("translation L1 ") + (vertical ? "vertical ray" : "not a vertical ray") + ", " +
         brouwer::to_string(tr.verdict);

    const auto horiz = brouwer::verify_brouwer_line(brouwer::translation<R>(1), make_line(Point<R>{0, 0}, Point<R>{1, 0}),
                                                    Rect<R>{-4, 4, -4, 4}, 1.0 / 256);
    ok = ok && !horiz.passed();
    d += std::string("; horizontal line ") + (horiz.passed() ? "accepted" : "rejected");

    const auto cs = brouwer::run_brouwer_pipeline<R>("compactified-shear");
    const bool cs_ok = cs.L1.termination == brouwer::Termination::twist_region && cs.coarse && cs.fine &&
                       cs.coarse->passed() && cs.fine->passed();
    ok = ok && cs_ok;
    d += std::string("; compactified shear ") + brouwer::to_string(cs.L1.termination) + ", " +
         (cs_ok ? "verified at 1/256 and 1/512" : "not verified");

    // The shear-chain fixture repeats its crossing pattern on every vertical,
    // so its built-in period is N = 1.
    const auto sc = brouwer::run_brouwer_pipeline<R>("shear-chain");
    const bool per_ok = sc.periodicity && sc.periodicity->N == 1;
    ok = ok && per_ok;
    d += "; shear-chain: " + std::to_string(sc.L1.events.size()) + " deviation events, ";
    if (sc.periodicity) d += "period " + std::to_string(sc.periodicity->N);
    else d += "no repeated (arc, side) label, construction ended: " + sc.message;
    return {ok, d};
}

Outcome criterion9() {
    checks::SuiteConfig cfg;
    const auto rs = checks::run_all(cfg);
    std::string failed;
    for (const auto& r : rs)
        if (!r.passed) failed += " " + r.suite + "/" + r.name;
    cfg.flip_gradient_sign = true;
    const auto mutated = checks::genfun_suite(cfg);
    bool caught = false;
    for (const auto& r : mutated) caught = caught || (r.name == "gradient-vs-fd counterexample" && !r.passed);
    const bool ok = checks::all_passed(rs) && caught && !checks::all_passed(mutated);
    return {ok, std::to_string(rs.size()) + " checks, " + (failed.empty() ? "all pass" : "failing:" + failed) +
                    "; sign-flipped gradient " + (caught ? "caught by gradient-vs-fd" : "NOT caught")};
}

} // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"counterexample fixed points at eps_k", criterion1},
        {"area preservation", criterion2},
        {"gradient identities", criterion3},
        {"scaling law", criterion4},
        {"flatness evidence", criterion5},
        {"analytic contrast", criterion6},
        {"Poincare-Birkhoff sanity", criterion7},
        {"Brouwer primitives", criterion8},
        {"property suite and mutation check", criterion9},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu %s: %s (%s) [%.1fs]\n", i + 1, criteria[i].first, o.passed ? "PASS" : "FAIL",
                    o.detail.c_str(), dt);
        failures += !o.passed;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures ? 1 : 0;
}
