#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "flatfix/core/errors.hpp"
#include "flatfix/core/point.hpp"

namespace flatfix::dynamics {

// Lift of an annulus map to the strip R x [0,1], commuting with (x,y) -> (x+1,y),
// optionally followed by the rigid translation (epsilon, 0).
template <class Real>
struct LiftMap {
    std::string name;
    std::function<Point<Real>(Point<Real>)> forward_base;
    std::function<Point<Real>(Point<Real>)> inverse_base;
    // forward_base(p) - p without cancellation; optional.
    std::function<Point<Real>(Point<Real>)> displacement_base;
    Real epsilon = 0;
    Real x_period = 1;

    Point<Real> forward(Point<Real> p) const {
        Point<Real> q = forward_base(p);
        q.x += epsilon;
        return q;
    }
    Point<Real> inverse(Point<Real> q) const { return inverse_base({q.x - epsilon, q.y}); }
    Point<Real> operator()(Point<Real> p) const { return forward(p); }

    Point<Real> base_displacement(Point<Real> p) const {
        return displacement_base ? displacement_base(p) : forward_base(p) - p;
    }
    Point<Real> displacement(Point<Real> p) const {
        Point<Real> d = base_displacement(p);
        d.x += epsilon;
        return d;
    }
    // Magnitude against which a residual at p is judged small.
    Real displacement_scale(Point<Real> p) const { return std::abs(epsilon) + norm(base_displacement(p)); }
};

template <class Real>
LiftMap<Real> translate_eps(LiftMap<Real> f, Real eps) {
    f.epsilon += eps;
    return f;
}

// Sign record of p1(f(x,1)) - x over sampled x in [0,1).
template <class Real>
struct BoundaryTwist {
    Real min_shift = std::numeric_limits<Real>::infinity();
    Real max_shift = -std::numeric_limits<Real>::infinity();
    bool positive() const { return min_shift > 0; }
};

template <class Real>
BoundaryTwist<Real> boundary_twist(const LiftMap<Real>& f, int samples = 100) {
    BoundaryTwist<Real> out;
    for (int i = 0; i < samples; ++i) {
        const Real x = Real(i) / Real(samples);
        const Real shift = f.displacement({x, 1}).x;
        out.min_shift = std::min(out.min_shift, shift);
        out.max_shift = std::max(out.max_shift, shift);
    }
    return out;
}

} // namespace flatfix::dynamics
