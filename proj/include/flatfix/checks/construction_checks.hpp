#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "flatfix/checks/genfun_checks.hpp"
#include "flatfix/construction/counterexample.hpp"

namespace flatfix::checks {

namespace detail {

inline construction::CounterexampleSpec<LD> deep_spec(int k0) {
    construction::CounterexampleSpec<LD> spec;
    spec.k0 = k0;
    spec.k_max = 64;  // sampled points reach far below the default k_max
    return spec;
}

// Points of the disc of radius r around c, from the Halton square.
inline Point<LD> disc_point(std::uint64_t i, Point<LD> c, LD r) {
    Point<LD> u = halton_point<LD>(i, {-1, 1, -1, 1});
    if (norm(u) > 1) u = u / (norm(u) * LD(1.0001));
    return c + r * u;
}

} // namespace detail

// p(x, y) = 2^-n p(2^n x, 2^n y) for y in (0, 2^-n], n = 1..10.
inline CheckResult check_scaling_law(int k0, std::uint64_t seed, int samples_per_n = 1000) {
    CheckResult r{"construction", "scaling law"};
    const auto spec = detail::deep_spec(k0);
    LD worst = 0;
    for (int n = 1; n <= 10; ++n) {
        const LD s = std::ldexp(LD(1), n);
        for (int i = 0; i < samples_per_n; ++i) {
            const Point<LD> u = halton_point<LD>(halton_offset(seed) + i, {-1, 1, 0, 1});
            // Half the samples log-uniform in y so deep bands are reached.
            const LD y = (i % 2 ? u.y : std::exp2(-30 * u.y)) / s;
            if (!(y > 0)) continue;
            const Point<LD> p{u.x / s, y};
            const LD lhs = construction::p_eval(spec, p);
            const LD rhs = construction::p_eval(spec, Point<LD>{s * p.x, s * p.y}) / s;
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
            ++r.samples;
        }
    }
    r.passed = worst <= 1e-12L;
    r.detail = "max rel err " + detail::fmt(worst);
    return r;
}

// psi o psi = id on B(p_k, 2^-(k+4)).
inline CheckResult check_psi_involution(int k0, std::uint64_t seed) {
    CheckResult r{"construction", "psi involution on inner balls"};
    const auto spec = detail::deep_spec(k0);
    LD worst = 0;
    for (int k = k0; k <= k0 + 20; ++k) {
        const construction::DyadicChart<LD> ch{k};
        for (int i = 0; i < 200; ++i) {
            const Point<LD> p = detail::disc_point(halton_offset(seed) + i, ch.center(), ch.inner_radius());
            const Point<LD> back = construction::psi(spec, construction::psi(spec, p));
            worst = std::max(worst, sup_norm(back - p) / ch.inner_radius());
            ++r.samples;
        }
    }
    r.passed = worst <= 1e-12L;
    r.detail = "max error relative to ball radius " + detail::fmt(worst);
    return r;
}

// |det D psi| = 1 by central differences over the support balls.
inline CheckResult check_psi_area(int k0, std::uint64_t seed) {
    CheckResult r{"construction", "psi area element"};
    const auto spec = detail::deep_spec(k0);
    LD worst = 0;
    for (int k = k0; k <= k0 + 12; ++k) {
        const construction::DyadicChart<LD> ch{k};
        const LD h = ch.support_radius() * 1e-5L;
        for (int i = 0; i < 200; ++i) {
            const Point<LD> p = detail::disc_point(halton_offset(seed) + i, ch.center(), ch.support_radius() * 1.05L);
            const Point<LD> dx = (construction::psi(spec, p + Point<LD>{h, 0}) - construction::psi(spec, p - Point<LD>{h, 0})) / (2 * h);
            const Point<LD> dy = (construction::psi(spec, p + Point<LD>{0, h}) - construction::psi(spec, p - Point<LD>{0, h})) / (2 * h);
            worst = std::max(worst, std::abs(std::abs(cross(dx, dy)) - 1));
            ++r.samples;
        }
    }
    r.passed = worst <= 1e-6L;
    r.detail = "max ||det| - 1| = " + detail::fmt(worst);
    return r;
}

// max_x |grad g(x, 2^-j)| strictly decreasing in j = 4..40 and below 1e-30 at
// the end; computed in log form so values past underflow still compare.
inline CheckResult check_gradient_decay(int k0) {
    CheckResult r{"construction", "gradient decay along y = 2^-j"};
    const auto spec = detail::deep_spec(k0);
    const Rect<LD> box = construction::strip_map_region<LD>(k0);
    LD prev = std::numeric_limits<LD>::infinity();
    bool monotone = true;
    std::string where;
    for (int j = 4; j <= 40; ++j) {
        const LD y = std::ldexp(LD(1), -j);
        LD best = -std::numeric_limits<LD>::infinity();
        for (int i = 0; i <= 64; ++i) {
            const LD x = box.x_min + box.width() * LD(i) / 64;
            const auto lg = construction::g_grad_log(spec, Point<LD>{x, y});
            best = std::max(best, lg.log_scale + std::log(norm(lg.direction)));
            ++r.samples;
        }
        if (!(best < prev)) { monotone = false; where = "j = " + std::to_string(j); }
        prev = best;
    }
    const LD log_floor = std::log(1e-30L);
    r.passed = monotone && prev < log_floor;
    r.detail = monotone ? "log max |grad g| at j = 40: " + detail::fmt(prev) : "not decreasing at " + where;
    return r;
}

// y/2 <= p(x, y) <= 2y.
inline CheckResult check_p_bounds(int k0, std::uint64_t seed) {
    CheckResult r{"construction", "y/2 <= p <= 2y"};
    const auto spec = detail::deep_spec(k0);
    std::size_t bad = 0;
    for (int i = 0; i < 5000; ++i) {
        const Point<LD> u = halton_point<LD>(halton_offset(seed) + i, {-0.5L, 0.5L, 0, 1});
        const LD y = i % 2 ? u.y : std::exp2(-40 * u.y);
        if (!(y > 0)) continue;
        const LD p = construction::p_eval(spec, Point<LD>{u.x * y, y});
        if (!(p >= y / 2 && p <= 2 * y)) ++bad;
        ++r.samples;
    }
    r.passed = bad == 0;
    r.detail = std::to_string(bad) + " violations";
    return r;
}

// grad g != 0 at every sampled point with y > 0; judged in log form.
inline CheckResult check_no_interior_critical_points(int k0, std::uint64_t seed) {
    CheckResult r{"construction", "no critical points off y = 0"};
    const auto spec = detail::deep_spec(k0);
    std::size_t bad = 0;
    auto probe = [&](Point<LD> p) {
        const auto lg = construction::g_grad_log(spec, p);
        if (!std::isfinite(lg.log_scale) || !(norm(lg.direction) > 0)) ++bad;
        ++r.samples;
    };
    for (int i = 0; i < 5000; ++i) {
        const Point<LD> u = halton_point<LD>(halton_offset(seed) + i, {-0.5L, 0.5L, 0, 1});
        const LD y = i % 2 ? u.y : std::exp2(-40 * u.y);
        if (y > 0) probe({u.x * y, y});
    }
    for (int k = k0; k <= k0 + 20; ++k) {
        const construction::DyadicChart<LD> ch{k};
        for (int i = 0; i < 100; ++i) probe(detail::disc_point(halton_offset(seed) + i, ch.center(), ch.support_radius()));
    }
    r.passed = bad == 0;
    r.detail = std::to_string(bad) + " samples with vanishing gradient";
    return r;
}

inline std::vector<CheckResult> construction_suite(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({"construction", name, false, false, 0, 0, std::string("error: ") + e.what()});
        }
    };
    guarded("scaling law", [&] { return check_scaling_law(cfg.k0, cfg.seed); });
    guarded("psi involution on inner balls", [&] { return check_psi_involution(cfg.k0, cfg.seed); });
    guarded("psi area element", [&] { return check_psi_area(cfg.k0, cfg.seed); });
    guarded("gradient decay along y = 2^-j", [&] { return check_gradient_decay(cfg.k0); });
    guarded("y/2 <= p <= 2y", [&] { return check_p_bounds(cfg.k0, cfg.seed); });
    guarded("no critical points off y = 0", [&] { return check_no_interior_critical_points(cfg.k0, cfg.seed); });
    return out;
}

} // namespace flatfix::checks
