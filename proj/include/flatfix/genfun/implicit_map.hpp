#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "flatfix/core/errors.hpp"
#include "flatfix/core/point.hpp"
#include "flatfix/genfun/scalar_field.hpp"

namespace flatfix::genfun {

enum class SeedPolicy { at_x, at_previous };

template <class Real>
struct ImplicitSolveConfig {
    Real tolerance = Real(1e-12);
    int max_iterations = 50;
    SeedPolicy initial_guess_policy = SeedPolicy::at_x;

    void validate() const {
        if (!(tolerance > 0)) throw ConfigError("implicit solve tolerance must be positive");
        if (max_iterations < 1) throw ConfigError("implicit solve max_iterations must be at least 1");
    }
};

// Image of (x, y) together with the displacement (X - x, Y - y) taken from
// the generating function directly, so tiny displacements keep full relative
// precision.
template <class Real>
struct ForwardSolution {
    Point<Real> image;
    Point<Real> displacement;
    int iterations = 0;
};

namespace detail {

// Solves v - phi(v) = target for v, where phi is a small-Lipschitz
// perturbation; dphi is its derivative. Damped Newton from `seed`, with a
// bracketing bisection as the fallback.
template <class Real, class Phi, class DPhi>
Real solve_perturbed_identity(Real target, Real seed, Phi phi, DPhi dphi, const ImplicitSolveConfig<Real>& cfg,
                              int* iterations, const char* what) {
    const Real eps = std::numeric_limits<Real>::epsilon();
    auto residual = [&](Real v) { return v - phi(v) - target; };

    Real v = seed;
    Real r = residual(v);
    Real slope = 1;
    int it = 0;
    bool converged = false;
    for (; it < cfg.max_iterations; ++it) {
        if (!std::isfinite(r)) break;
        if (r == 0) { converged = true; break; }
        // Chord iteration: the slope is taken once, at the seed.
        if (it == 0) {
            slope = 1 - dphi(v);
            if (!(slope > Real(0.25)) || !std::isfinite(slope)) slope = 1;
        }
        Real step = r / slope;
        Real v_new = v - step;
        Real r_new = residual(v_new);
        for (int damp = 0; damp < 30 && !(std::abs(r_new) < std::abs(r)) && std::abs(step) > 0; ++damp) {
            step /= 2;
            v_new = v - step;
            r_new = residual(v_new);
        }
        const bool tiny_step = std::abs(v_new - v) <= 4 * eps * std::max(std::abs(v), std::abs(target));
        const bool stalled = !(std::abs(r_new) < std::abs(r));
        if (!stalled) { v = v_new; r = r_new; }
        if (tiny_step || stalled) {
            converged = std::abs(r) <= cfg.tolerance;
            ++it;
            break;
        }
    }
    if (iterations) *iterations = it;
    if (converged) return v;

    // Bisection on an expanding bracket around the seed.
    Real width = 2 * std::abs(phi(seed)) + cfg.tolerance;
    Real lo = seed - width, hi = seed + width;
    Real rlo = residual(lo), rhi = residual(hi);
    for (int expand = 0; expand < 60 && rlo * rhi > 0; ++expand) {
        width *= 2;
        lo = seed - width;
        hi = seed + width;
        rlo = residual(lo);
        rhi = residual(hi);
    }
    if (!(rlo * rhi <= 0)) throw NonConvergence(std::string(what) + ": no bracket for the implicit equation");
    for (int b = 0; b < 400 && hi - lo > 2 * eps * std::max(std::abs(lo), std::abs(hi)); ++b) {
        const Real mid = lo + (hi - lo) / 2;
        const Real rm = residual(mid);
        if (rm == 0) { lo = hi = mid; break; }
        if ((rm < 0) == (rlo < 0)) { lo = mid; rlo = rm; } else { hi = mid; }
    }
    const Real root = lo + (hi - lo) / 2;
    if (!(std::abs(residual(root)) <= cfg.tolerance))
        throw NonConvergence(std::string(what) + ": iteration limit reached without meeting tolerance");
    return root;
}

} // namespace detail

// Solves x = X - g_y(X, y) for X and sets Y = y - g_X(X, y).
template <class Real>
ForwardSolution<Real> solve_forward_detail(const ScalarField2<Real>& g, Point<Real> p,
                                           const ImplicitSolveConfig<Real>& cfg = {},
                                           std::optional<Real> previous = std::nullopt) {
    if (!g.domain_hint.contains(p)) throw OutOfDomain("solve_forward: point outside the field's domain");
    const Real seed = (cfg.initial_guess_policy == SeedPolicy::at_previous && previous) ? *previous : p.x;
    ForwardSolution<Real> out;
    const Real X = detail::solve_perturbed_identity<Real>(
        p.x, seed, [&](Real v) { return g.grad(v, p.y).y; }, [&](Real v) { return g.mixed_partial(v, p.y); }, cfg,
        &out.iterations, "solve_forward");
    const Point<Real> d = g.grad(X, p.y);
    out.image = {X, p.y - d.x};
    out.displacement = {d.y, -d.x};
    return out;
}

template <class Real>
Point<Real> solve_forward(const ScalarField2<Real>& g, Point<Real> p, const ImplicitSolveConfig<Real>& cfg = {}) {
    return solve_forward_detail(g, p, cfg).image;
}

// Solves Y = y - g_X(X, y) for y and sets x = X - g_y(X, y).
template <class Real>
Point<Real> solve_inverse(const ScalarField2<Real>& g, Point<Real> q, const ImplicitSolveConfig<Real>& cfg = {}) {
    const auto& dom = g.domain_hint;
    if (!(q.x >= dom.x_min && q.x <= dom.x_max)) throw OutOfDomain("solve_inverse: X outside the field's domain");
    auto clamp_y = [&](Real y) { return std::clamp(y, dom.y_min, dom.y_max); };
    int iterations = 0;
    const Real y = detail::solve_perturbed_identity<Real>(
        q.y, clamp_y(q.y), [&](Real v) { return g.grad(q.x, clamp_y(v)).x; },
        [&](Real v) { return g.mixed_partial_y(q.x, clamp_y(v)); }, cfg, &iterations, "solve_inverse");
    if (!(y >= dom.y_min && y <= dom.y_max)) throw OutOfDomain("solve_inverse: preimage leaves the strip");
    return {q.x - g.grad(q.x, y).y, y};
}

// Evaluable map of (a region of) the strip with its inverse.
template <class Real>
struct StripMap {
    std::function<Point<Real>(Point<Real>)> forward;
    std::function<Point<Real>(Point<Real>)> inverse;
    // forward(p) - p computed without cancellation; optional.
    std::function<Point<Real>(Point<Real>)> displacement;
    bool periodic_in_x = false;
    Real period = 1;
    Rect<Real> valid_region = Rect<Real>::strip();

    Point<Real> displace(Point<Real> p) const { return displacement ? displacement(p) : forward(p) - p; }
};

template <class Real>
StripMap<Real> make_strip_map(ScalarField2<Real> g, Rect<Real> region, ImplicitSolveConfig<Real> cfg = {}) {
    cfg.validate();
    StripMap<Real> m;
    m.forward = [g, cfg](Point<Real> p) { return solve_forward(g, p, cfg); };
    m.inverse = [g, cfg](Point<Real> q) { return solve_inverse(g, q, cfg); };
    m.displacement = [g, cfg](Point<Real> p) { return solve_forward_detail(g, p, cfg).displacement; };
    m.valid_region = region;
    return m;
}

// Central finite-difference Jacobian of m.forward.
template <class Real>
Mat2<Real> jacobian_fd(const StripMap<Real>& m, Point<Real> p, Real step) {
    const auto& r = m.valid_region;
    if (!(p.x - step >= r.x_min && p.x + step <= r.x_max && p.y - step >= r.y_min && p.y + step <= r.y_max))
        throw OutOfDomain("jacobian_fd: stencil leaves the valid region");
    // Differences of displacements keep the identity part exact.
    const Point<Real> dx = (m.displace({p.x + step, p.y}) - m.displace({p.x - step, p.y})) / (2 * step);
    const Point<Real> dy = (m.displace({p.x, p.y + step}) - m.displace({p.x, p.y - step})) / (2 * step);
    return {1 + dx.x, dy.x, dx.y, 1 + dy.y};
}

template <class Real>
Mat2<Real> jacobian_fd(const StripMap<Real>& m, Point<Real> p) {
    return jacobian_fd(m, p, Real(1e-5));
}

// Finite-order flatness of g along y = 0, estimated one-sidedly.
template <class Real>
struct HypothesisReport {
    static constexpr const char* labels[6] = {"(0,0)", "(1,0)", "(0,1)", "(2,0)", "(1,1)", "(0,2)"};
    Real max_abs[6] = {0, 0, 0, 0, 0, 0};
    Real tolerance{};
    Real step{};
    bool passed = true;

    int worst() const {
        int w = 0;
        for (int i = 1; i < 6; ++i)
            if (max_abs[i] > max_abs[w]) w = i;
        return w;
    }
};

template <class Real>
HypothesisReport<Real> check_hypothesis(const ScalarField2<Real>& g, const std::vector<Real>& xs,
                                        Real step = Real(1e-3), Real tolerance = Real(1e-8)) {
    HypothesisReport<Real> rep;
    rep.tolerance = tolerance;
    rep.step = step;
    for (Real x : xs) {
        const Point<Real> g0 = g.grad(x, 0), g1 = g.grad(x, step), g2 = g.grad(x, 2 * step);
        const Real est[6] = {
            g.eval(x, 0),
            g0.x,
            g0.y,
            (g.grad(x + step, 0).x - g.grad(x - step, 0).x) / (2 * step),
            (-3 * g0.x + 4 * g1.x - g2.x) / (2 * step),
            (-3 * g0.y + 4 * g1.y - g2.y) / (2 * step),
        };
        for (int i = 0; i < 6; ++i) rep.max_abs[i] = std::max(rep.max_abs[i], std::abs(est[i]));
    }
    for (Real v : rep.max_abs)
        if (!(v <= tolerance)) rep.passed = false;
    return rep;
}

// Sampled sup of |g_yX| over a rectangle; the region is a valid domain for
// the implicit solve when this stays below 1/2.
template <class Real>
Real contraction_bound(const ScalarField2<Real>& g, Rect<Real> region, int samples_per_side = 96) {
    Real worst = 0;
    for (int i = 0; i <= samples_per_side; ++i) {
        for (int j = 0; j <= samples_per_side; ++j) {
            const Real X = region.x_min + region.width() * Real(i) / Real(samples_per_side);
            const Real y = region.y_min + region.height() * Real(j) / Real(samples_per_side);
            worst = std::max(worst, std::abs(g.mixed_partial(X, y)));
        }
    }
    return worst;
}

template <class Real>
bool is_contraction_region(const ScalarField2<Real>& g, Rect<Real> region, int samples_per_side = 96) {
    return contraction_bound(g, region, samples_per_side) < Real(0.5);
}

} // namespace flatfix::genfun
