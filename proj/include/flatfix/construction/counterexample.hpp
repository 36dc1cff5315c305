#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "flatfix/construction/bump.hpp"
#include "flatfix/construction/dyadic_chart.hpp"
#include "flatfix/construction/flat_function.hpp"
#include "flatfix/core/errors.hpp"
#include "flatfix/core/point.hpp"
#include "flatfix/dynamics/lift_map.hpp"
#include "flatfix/genfun/implicit_map.hpp"
#include "flatfix/genfun/scalar_field.hpp"

namespace flatfix::construction {

template <class Real>
struct CounterexampleSpec {
    int k0 = 4;
    int k_max = 24;
    BumpProfile<Real> profile{};

    void validate() const {
        if (k0 < 1) throw ConfigError("k0 must be a positive integer");
        if (k_max < k0 + 2) throw ConfigError("k_max must be at least k0 + 2");
    }
};

template <class Real>
Real s_k(int k) { return FlatFunction<Real>::prime(std::ldexp(Real(1), -k)); }

template <class Real>
Real m_k(int k) { return FlatFunction<Real>::prime(3 * std::ldexp(Real(1), -(k + 2))); }

template <class Real>
Point<Real> p_k(int k) { return DyadicChart<Real>{k}.center(); }

// p = p2 o psi together with its exact partial derivatives.
template <class Real>
struct PJet {
    Real value{};
    Point<Real> grad{0, 1};
};

namespace detail {

template <class Real>
struct LocalChart {
    DyadicChart<Real> chart;
    Point<Real> local;  // t_k(p)
    Real s{};           // |t_k(p)|^2
};

// Chart data when p lies in an active support ball, nothing when psi is the
// identity near p.
template <class Real>
std::optional<LocalChart<Real>> active_chart(const CounterexampleSpec<Real>& spec, Point<Real> p) {
    const auto k = band_of(p.y);
    if (!k) return std::nullopt;
    const DyadicChart<Real> chart{*k};
    const Point<Real> q = chart.forward(p);
    const Real s = q.x * q.x + q.y * q.y;
    if (s >= BumpProfile<Real>::outer) return std::nullopt;
    if (*k > spec.k_max)
        throw OutOfDomain("point lies in a support ball deeper than k_max = " + std::to_string(spec.k_max));
    return LocalChart<Real>{chart, q, s};
}

} // namespace detail

template <class Real>
Point<Real> psi(const CounterexampleSpec<Real>& spec, Point<Real> p) {
    const auto lc = detail::active_chart(spec, p);
    if (!lc) return p;
    const Real rho = spec.profile.eval(lc->s);
    const Point<Real> q = lc->local;
    Point<Real> r;
    if (rho == 1) {
        r = -q;
    } else {
        const Real theta = std::numbers::pi_v<Real> * rho;
        const Real c = std::cos(theta), sn = std::sin(theta);
        r = {c * q.x - sn * q.y, sn * q.x + c * q.y};
    }
    return lc->chart.inverse(r);
}

template <class Real>
PJet<Real> p_jet(const CounterexampleSpec<Real>& spec, Point<Real> p) {
    const auto lc = detail::active_chart(spec, p);
    if (!lc) return {p.y, {0, 1}};
    const Real rho = spec.profile.eval(lc->s);
    const Real a = lc->local.x, b = lc->local.y;
    Real c = -1, sn = 0;
    if (rho != 1) {
        const Real theta = std::numbers::pi_v<Real> * rho;
        c = std::cos(theta);
        sn = std::sin(theta);
    }
    const Real A = lc->chart.scale();
    const Real w = a * c - b * sn;
    const Real dtheta_ds = std::numbers::pi_v<Real> * spec.profile.eval_prime(lc->s);
    PJet<Real> out;
    out.value = (a * sn + b * c + 3) / A;
    out.grad = {sn + w * 2 * a * dtheta_ds, c + w * 2 * b * dtheta_ds};
    return out;
}

template <class Real>
Real p_eval(const CounterexampleSpec<Real>& spec, Point<Real> p) {
    return p_jet(spec, p).value;
}

template <class Real>
Real g_eval(const CounterexampleSpec<Real>& spec, Point<Real> p) {
    return FlatFunction<Real>::eval(p_eval(spec, p));
}

template <class Real>
Point<Real> g_grad(const CounterexampleSpec<Real>& spec, Point<Real> p) {
    const PJet<Real> j = p_jet(spec, p);
    return FlatFunction<Real>::prime(j.value) * j.grad;
}

// grad g = exp(log_scale) * direction, usable after exp(log_scale) underflows.
template <class Real>
struct LogGradient {
    Real log_scale{};
    Point<Real> direction{};
};

template <class Real>
LogGradient<Real> g_grad_log(const CounterexampleSpec<Real>& spec, Point<Real> p) {
    const PJet<Real> j = p_jet(spec, p);
    return {FlatFunction<Real>::log_prime(j.value), j.grad};
}

template <class Real>
genfun::ScalarField2<Real> make_generating_field(const CounterexampleSpec<Real>& spec) {
    genfun::ScalarField2<Real> g;
    g.eval = [spec](Real X, Real y) { return g_eval(spec, Point<Real>{X, y}); };
    g.grad = [spec](Real X, Real y) { return g_grad(spec, Point<Real>{X, y}); };
    g.domain_hint = Rect<Real>::strip();
    return g;
}

template <class Real>
Rect<Real> strip_map_region(int k0) {
    const Real half = std::ldexp(Real(1), -(k0 + 1));
    return {-half, half, 0, 2 * half};
}

template <class Real>
genfun::StripMap<Real> build_strip_map(const CounterexampleSpec<Real>& spec,
                                       const genfun::ImplicitSolveConfig<Real>& cfg = {}) {
    spec.validate();
    const auto g = make_generating_field(spec);
    const Rect<Real> region = strip_map_region<Real>(spec.k0);
    const Real bound = genfun::contraction_bound(g, region);
    if (!(bound < Real(0.5)))
        throw ContractionFailure("sup |g_yX| = " + std::to_string(static_cast<double>(bound)) +
                                 " >= 1/2 on the k0 = " + std::to_string(spec.k0) + " region; raise k0");
    return genfun::make_strip_map(g, region, cfg);
}

template <class Real>
struct PredictedFixedData {
    int k{};
    Real epsilon{};
    Point<Real> point{};
};

// Translation amount epsilon_k = 2^{k0} m_k and the point it fixes in the
// rescaled lift.
template <class Real>
PredictedFixedData<Real> predicted_fixed_data(const CounterexampleSpec<Real>& spec, int k) {
    if (k < spec.k0 || k > spec.k_max)
        throw ConfigError("predicted_fixed_data: k must lie in [k0, k_max]");
    const Real scale = std::ldexp(Real(1), spec.k0);
    const Real eps = scale * m_k<Real>(k);
    return {k, eps, {eps, 3 * std::ldexp(Real(1), spec.k0 - k - 2)}};
}

template <class Real>
dynamics::LiftMap<Real> build_annulus_map(const CounterexampleSpec<Real>& spec,
                                          const genfun::ImplicitSolveConfig<Real>& cfg = {}) {
    build_strip_map(spec, cfg);  // contraction check
    const auto g = make_generating_field(spec);
    const Real scale = std::ldexp(Real(1), spec.k0);

    auto raw = [g, cfg, scale](Point<Real> p) {
        const auto sol = genfun::solve_forward_detail(g, Point<Real>{p.x / scale, p.y / scale}, cfg);
        return std::pair{Point<Real>{sol.image.x * scale, sol.image.y * scale}, scale * sol.displacement};
    };
    auto check_y = [](Point<Real> p) {
        if (!(p.y >= 0 && p.y <= 1)) throw OutOfDomain("annulus map: y outside [0, 1]");
    };

    for (int i = 0; i <= 64; ++i) {
        const Real y = Real(i) / 64;
        const Point<Real> right = raw({Real(0.5), y}).first;
        const Point<Real> left = raw({Real(-0.5), y}).first;
        const Real mismatch = sup_norm(right - left - Point<Real>{1, 0});
        if (!(mismatch <= Real(1e-12)))
            throw GluingMismatch("edge images at x = +-1/2 differ by " + std::to_string(static_cast<double>(mismatch)) +
                                 " at y = " + std::to_string(static_cast<double>(y)) + "; raise k0");
    }

    dynamics::LiftMap<Real> f;
    f.name = "counterexample";
    f.forward_base = [raw, check_y](Point<Real> p) {
        check_y(p);
        const Real n = std::floor(p.x + Real(0.5));
        const Point<Real> img = raw({p.x - n, p.y}).first;
        return Point<Real>{img.x + n, img.y};
    };
    f.displacement_base = [raw, check_y](Point<Real> p) {
        check_y(p);
        const Real n = std::floor(p.x + Real(0.5));
        return raw({p.x - n, p.y}).second;
    };
    f.inverse_base = [g, cfg, scale, check_y](Point<Real> q) {
        check_y(q);
        const Real n = std::floor(q.x + Real(0.5));
        const Point<Real> pre = genfun::solve_inverse(g, Point<Real>{(q.x - n) / scale, q.y / scale}, cfg);
        return Point<Real>{pre.x * scale + n, pre.y * scale};
    };
    return f;
}

} // namespace flatfix::construction
