#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "flatfix/checks/result.hpp"
#include "flatfix/construction/counterexample.hpp"
#include "flatfix/core/quasi_random.hpp"
#include "flatfix/dynamics/reference_maps.hpp"
#include "flatfix/genfun/implicit_map.hpp"

namespace flatfix::checks {

using LD = long double;

namespace detail {

inline std::string fmt(long double v) {
    std::ostringstream s;
    s.precision(4);
    s << static_cast<double>(v);
    return s.str();
}

// Lift map viewed as a strip map on the closed strip.
inline genfun::StripMap<LD> as_strip_map(const dynamics::LiftMap<LD>& f) {
    genfun::StripMap<LD> m;
    m.forward = [f](Point<LD> p) { return f.forward(p); };
    m.inverse = [f](Point<LD> p) { return f.inverse(p); };
    m.displacement = [f](Point<LD> p) { return f.displacement(p); };
    m.periodic_in_x = true;
    m.valid_region = Rect<LD>::strip();
    return m;
}

// g = A sin(2 pi X) sin(2 pi y), with interior critical points at
// (1/4 | 3/4, 1/4 | 3/4) and (0 | 1/2, 1/2).
inline genfun::ScalarField2<LD> egg_crate_field(LD A) {
    constexpr LD tau = 2 * std::numbers::pi_v<LD>;
    genfun::ScalarField2<LD> g;
    g.eval = [A](LD X, LD y) { return A * std::sin(tau * X) * std::sin(tau * y); };
    g.grad = [A](LD X, LD y) {
        return Point<LD>{A * tau * std::cos(tau * X) * std::sin(tau * y), A * tau * std::sin(tau * X) * std::cos(tau * y)};
    };
    g.mixed = [A](LD X, LD y) { return A * tau * tau * std::cos(tau * X) * std::cos(tau * y); };
    return g;
}

inline genfun::ScalarField2<LD> counterexample_field(const SuiteConfig& cfg) {
    construction::CounterexampleSpec<LD> spec;
    spec.k0 = cfg.k0;
    auto g = construction::make_generating_field(spec);
    if (cfg.flip_gradient_sign) {
        auto grad = g.grad;
        g.grad = [grad](LD X, LD y) { return -grad(X, y); };
    }
    return g;
}

} // namespace detail

// |det Df - 1| <= 1e-6 by central differences at step 1e-5, at quasi-random
// points with y >= 1e-3.
inline CheckResult check_area_preservation(const dynamics::LiftMap<LD>& f, int samples, std::uint64_t seed,
                                           const std::string& label) {
    CheckResult r{"genfun", "area-preservation " + label};
    const auto m = detail::as_strip_map(f);
    const LD step = 1e-5L;
    const Rect<LD> box{0, 1, 1e-3L, 1 - step};
    LD worst = 0;
    Point<LD> at{};
    for (int i = 0; i < samples; ++i) {
        const Point<LD> p = halton_point<LD>(halton_offset(seed) + i, box);
        const LD err = std::abs(genfun::jacobian_fd(m, p, step).det() - 1);
        if (!(err <= worst)) { worst = err; at = p; }
        ++r.samples;
    }
    r.passed = worst <= 1e-6L;
    r.detail = "max |det - 1| = " + detail::fmt(worst) + " at (" + detail::fmt(at.x) + ", " + detail::fmt(at.y) + ")";
    return r;
}

// Fixed points of the map of g against critical points of g. The map side is
// image - p from the iterative solve; the field side is |grad g| at (X, y).
// Samples where either side is within a factor 10 of the threshold are not judged.
inline CheckResult check_critical_correspondence(std::uint64_t seed) {
    CheckResult r{"genfun", "fixed-point/critical-point correspondence"};
    const auto g = detail::egg_crate_field(0.05L / (4 * std::numbers::pi_v<LD> * std::numbers::pi_v<LD>));
    const LD thr = 1e-9L;
    std::vector<Point<LD>> pts = {{0.25L, 0.25L}, {0.75L, 0.25L}, {0.25L, 0.75L}, {0.75L, 0.75L}, {0, 0.5L}, {0.5L, 0.5L}};
    for (std::size_t i = 0, n = pts.size(); i < n; ++i) {
        pts.push_back(pts[i] + Point<LD>{1e-4L, 0});
        pts.push_back(pts[i] + Point<LD>{0, -1e-3L});
    }
    for (int i = 0; i < 2000; ++i) pts.push_back(halton_point<LD>(halton_offset(seed) + i, {0, 1, 0.01L, 0.99L}));
    std::size_t fixed = 0, mismatched = 0;
    for (const auto& p : pts) {
        const Point<LD> img = genfun::solve_forward(g, p);
        const LD map_side = norm(img - p);
        const LD field_side = norm(g.grad(img.x, p.y));
        auto near_thr = [&](LD v) { return v > thr / 10 && v < thr * 10; };
        if (near_thr(map_side) || near_thr(field_side)) { ++r.limited; continue; }
        ++r.samples;
        const bool is_fixed = map_side <= thr, is_crit = field_side <= thr;
        fixed += is_fixed;
        if (is_fixed != is_crit) ++mismatched;
    }
    r.resolution_limited = r.limited > 0;
    r.passed = mismatched == 0 && fixed >= 6;
    r.detail = std::to_string(fixed) + " fixed samples, " + std::to_string(mismatched) + " mismatches";
    return r;
}

inline CheckResult check_roundtrip(const genfun::ScalarField2<LD>& g, Rect<LD> box, std::uint64_t seed,
                                   const std::string& label) {
    CheckResult r{"genfun", "roundtrip " + label};
    const genfun::ImplicitSolveConfig<LD> sc{};
    const LD bound = 10 * sc.tolerance;
    LD worst = 0;
    std::size_t skipped = 0;
    for (int i = 0; i < 1000; ++i) {
        const Point<LD> p = halton_point<LD>(halton_offset(seed) + i, box);
        try {
            const Point<LD> back = genfun::solve_inverse(g, genfun::solve_forward(g, p, sc), sc);
            worst = std::max(worst, sup_norm(back - p));
            ++r.samples;
        } catch (const OutOfDomain&) {
            ++skipped;  // image outside the strip: not in the valid region
        }
    }
    r.passed = worst <= bound && r.samples > 0;
    r.detail = "max error " + detail::fmt(worst) + " (bound " + detail::fmt(bound) + "), " + std::to_string(skipped) +
               " samples left the strip";
    return r;
}

// grad g against central differences of g at step 1e-4, relative error 1e-5.
// Where the Richardson estimate says the step-1e-4 difference is itself off
// by more than 1e-6, the step is halved until it is not (at most 16 times) and
// the point is judged there and counted as resolution-limited.
inline CheckResult check_gradient_fd(const genfun::ScalarField2<LD>& g, Rect<LD> box, std::uint64_t seed,
                                     const std::string& label) {
    CheckResult r{"genfun", "gradient-vs-fd " + label};
    const LD h0 = 1e-4L, rel = 1e-5L;
    std::size_t failed = 0;
    LD worst = 0;
    for (int i = 0; i < 500; ++i) {
        const Point<LD> p = halton_point<LD>(halton_offset(seed) + i, box);
        auto diff = [&](LD s) {
            return Point<LD>{(g.eval(p.x + s, p.y) - g.eval(p.x - s, p.y)) / (2 * s),
                             (g.eval(p.x, p.y + s) - g.eval(p.x, p.y - s)) / (2 * s)};
        };
        const Point<LD> exact = g.grad(p.x, p.y);
        LD h = h0;
        Point<LD> d = diff(h), d_half = diff(h / 2);
        const LD scale = std::max(norm(d), std::numeric_limits<LD>::min());
        for (int halvings = 0; halvings < 16 && norm(d - d_half) * 4 / 3 > rel / 10 * scale; ++halvings) {
            h /= 2;
            d = d_half;
            d_half = diff(h / 2);
        }
        ++r.samples;
        if (h < h0) ++r.limited;
        const LD err = norm(d - exact) / scale;
        worst = std::max(worst, err);
        if (!(err <= rel)) ++failed;
    }
    r.resolution_limited = r.limited > 0;
    r.passed = failed == 0;
    r.detail = std::to_string(failed) + " failures, " + std::to_string(r.limited) +
               " needed a step below 1e-4, max rel err " + detail::fmt(worst);
    return r;
}

inline std::vector<CheckResult> genfun_suite(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    construction::CounterexampleSpec<LD> spec;
    spec.k0 = cfg.k0;
    auto ce = detail::counterexample_field(cfg);
    const Rect<LD> ce_box = construction::strip_map_region<LD>(cfg.k0);
    const auto twist = dynamics::twist_field<LD>(0.2L);

    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({"genfun", name, false, false, 0, 0, std::string("error: ") + e.what()});
        }
    };
    guarded("area-preservation counterexample", [&] {
        return check_area_preservation(construction::build_annulus_map(spec), cfg.area_samples, cfg.seed, "counterexample");
    });
    guarded("area-preservation twist",
            [&] { return check_area_preservation(dynamics::twist_map<LD>(), 1000, cfg.seed, "twist"); });
    guarded("fixed-point/critical-point correspondence", [&] { return check_critical_correspondence(cfg.seed); });
    guarded("roundtrip counterexample", [&] {
        return check_roundtrip(ce, {ce_box.x_min, ce_box.x_max, ce_box.height() * 1e-3L, ce_box.y_max}, cfg.seed,
                               "counterexample");
    });
    guarded("roundtrip twist", [&] { return check_roundtrip(twist, {0, 1, 1e-3L, 1 - 1e-3L}, cfg.seed, "twist"); });
    guarded("gradient-vs-fd counterexample", [&] {
        return check_gradient_fd(ce, {ce_box.x_min + 1e-3L, ce_box.x_max - 1e-3L, 1e-2L, ce_box.y_max - 1e-3L}, cfg.seed,
                                 "counterexample");
    });
    guarded("gradient-vs-fd twist", [&] { return check_gradient_fd(twist, {0, 1, 1e-2L, 1 - 1e-2L}, cfg.seed, "twist"); });
    return out;
}

} // namespace flatfix::checks
