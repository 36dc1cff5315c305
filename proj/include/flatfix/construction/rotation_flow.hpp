#pragma once

#include <cmath>
#include <numbers>

#include "flatfix/construction/bump.hpp"
#include "flatfix/core/point.hpp"

namespace flatfix::construction {

// Time-t flow of rho(x^2 + y^2) (-y, x). The angular speed is constant on
// each circle, so the flow is the rotation by t rho(r^2).
template <class Real>
struct RotationFlow {
    BumpProfile<Real> profile{};

    Point<Real> apply(Point<Real> p, Real t) const {
        const Real rho = profile.eval(p.x * p.x + p.y * p.y);
        if (rho == 0 || t == 0) return p;
        if (rho == 1 && t == std::numbers::pi_v<Real>) return -p;
        const Real theta = t * rho;
        const Real c = std::cos(theta), s = std::sin(theta);
        return {c * p.x - s * p.y, s * p.x + c * p.y};
    }
};

template <class Real>
Point<Real> flow_apply(const RotationFlow<Real>& fl, Point<Real> p, Real t) {
    return fl.apply(p, t);
}

} // namespace flatfix::construction
