#pragma once

#include <functional>
#include <string>

#include "flatfix/core/point.hpp"

namespace flatfix::genfun {

// Smooth real function on the strip, with its exact gradient (d/dX, d/dy).
// `mixed` is the optional exact cross partial d^2/dXdy; when absent it is
// estimated by central differences of the gradient.
template <class Real>
struct ScalarField2 {
    std::function<Real(Real, Real)> eval;
    std::function<Point<Real>(Real, Real)> grad;
    std::function<Real(Real, Real)> mixed;
    Rect<Real> domain_hint = Rect<Real>::strip();

    Real mixed_partial(Real X, Real y) const {
        if (mixed) return mixed(X, y);
        const Real h = fd_step(X);
        return (grad(X + h, y).y - grad(X - h, y).y) / (2 * h);
    }

    // d/dy of g_X, the same quantity taken in the other order; this version
    // differentiates in y and is used by the inverse solve.
    Real mixed_partial_y(Real X, Real y) const {
        if (mixed) return mixed(X, y);
        const Real h = std::min(fd_step(y), y > 0 ? y / 2 : fd_step(y));
        if (y - h < domain_hint.y_min) return (grad(X, y + h).x - grad(X, y).x) / h;
        return (grad(X, y + h).x - grad(X, y - h).x) / (2 * h);
    }

    static Real fd_step(Real v) {
        return std::cbrt(std::numeric_limits<Real>::epsilon()) * std::max(Real(1), std::abs(v)) * Real(1e-2);
    }
};

template <class Real>
ScalarField2<Real> zero_field() {
    return {[](Real, Real) { return Real(0); },
            [](Real, Real) { return Point<Real>{0, 0}; },
            [](Real, Real) { return Real(0); }};
}

// g(X,y) = c X y.
template <class Real>
ScalarField2<Real> bilinear_field(Real c) {
    return {[c](Real X, Real y) { return c * X * y; },
            [c](Real X, Real y) { return Point<Real>{c * y, c * X}; },
            [c](Real, Real) { return c; }};
}

} // namespace flatfix::genfun
