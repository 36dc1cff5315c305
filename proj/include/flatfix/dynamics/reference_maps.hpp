#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "flatfix/core/errors.hpp"
#include "flatfix/dynamics/lift_map.hpp"
#include "flatfix/genfun/implicit_map.hpp"
#include "flatfix/genfun/scalar_field.hpp"

namespace flatfix::dynamics {

template <class Real>
LiftMap<Real> identity_map() {
    LiftMap<Real> f;
    f.name = "identity";
    f.forward_base = [](Point<Real> p) { return p; };
    f.inverse_base = [](Point<Real> p) { return p; };
    f.displacement_base = [](Point<Real>) { return Point<Real>{0, 0}; };
    return f;
}

// (x, y) -> (x + y, y)
template <class Real>
LiftMap<Real> shear_map() {
    LiftMap<Real> f;
    f.name = "shear";
    f.forward_base = [](Point<Real> p) { return Point<Real>{p.x + p.y, p.y}; };
    f.inverse_base = [](Point<Real> p) { return Point<Real>{p.x - p.y, p.y}; };
    f.displacement_base = [](Point<Real> p) { return Point<Real>{p.y, 0}; };
    return f;
}

// g(X, y) = y^2/2 + a y^2 (1-y)^2 sin(2 pi X). The y^2/2 term supplies the
// twist; the (1-y)^2 factor keeps both boundary circles invariant.
template <class Real>
genfun::ScalarField2<Real> twist_field(Real a) {
    constexpr Real tau = 2 * std::numbers::pi_v<Real>;
    genfun::ScalarField2<Real> g;
    g.eval = [a](Real X, Real y) {
        const Real w = y * (1 - y);
        return y * y / 2 + a * w * w * std::sin(tau * X);
    };
    g.grad = [a](Real X, Real y) {
        const Real w = y * (1 - y);
        return Point<Real>{a * w * w * tau * std::cos(tau * X), y + 2 * a * w * (1 - 2 * y) * std::sin(tau * X)};
    };
    g.mixed = [a](Real X, Real y) {
        const Real w = y * (1 - y);
        return 2 * a * w * (1 - 2 * y) * tau * std::cos(tau * X);
    };
    g.domain_hint = Rect<Real>::strip();
    return g;
}

template <class Real>
LiftMap<Real> twist_map(Real a = Real(0.2), const genfun::ImplicitSolveConfig<Real>& cfg = {}) {
    const auto g = twist_field(a);
    if (!genfun::is_contraction_region(g, Rect<Real>{0, 1, 0, 1}))
        throw ConfigError("twist amplitude too large for the implicit solve");
    LiftMap<Real> f;
    f.name = "twist";
    f.forward_base = [g, cfg](Point<Real> p) { return genfun::solve_forward(g, p, cfg); };
    f.inverse_base = [g, cfg](Point<Real> q) { return genfun::solve_inverse(g, q, cfg); };
    f.displacement_base = [g, cfg](Point<Real> p) { return genfun::solve_forward_detail(g, p, cfg).displacement; };
    return f;
}

template <class Real>
std::vector<LiftMap<Real>> reference_maps() {
    return {identity_map<Real>(), shear_map<Real>(), twist_map<Real>()};
}

template <class Real>
LiftMap<Real> reference_map(const std::string& name) {
    for (auto& f : reference_maps<Real>())
        if (f.name == name) return f;
    throw ConfigError("unknown reference map '" + name + "'");
}

} // namespace flatfix::dynamics
