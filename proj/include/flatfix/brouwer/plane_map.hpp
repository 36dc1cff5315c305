#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "flatfix/core/errors.hpp"
#include "flatfix/core/point.hpp"
#include "flatfix/dynamics/lift_map.hpp"

namespace flatfix::brouwer {

// Fixed-point-free orientation-preserving plane homeomorphism, given with
// its inverse. `periodic` asserts h(x+1, y) = h(x, y) + (1, 0).
template <class Real>
struct PlaneMap {
    std::string name;
    std::function<Point<Real>(Point<Real>)> forward;
    std::function<Point<Real>(Point<Real>)> inverse;
    bool periodic = false;

    Point<Real> operator()(Point<Real> p) const { return forward(p); }
};

// d(x, y) = (x, (y - 1/2) / (y (1 - y))) from the open strip onto the plane.
template <class Real>
Point<Real> compactify_point(Point<Real> p) {
    if (!(p.y > 0 && p.y < 1)) throw BoundaryPoint("compactify: point not in the open strip");
    return {p.x, (p.y - Real(0.5)) / (p.y * (1 - p.y))};
}

// Inverse of d: solves v y^2 + (1 - v) y - 1/2 = 0 for the root in (0, 1),
// written as y = t / (1 + t) with t = y / (1 - y) to avoid cancellation.
template <class Real>
Point<Real> decompactify_point(Point<Real> q) {
    const Real v = q.y;
    const Real s = std::sqrt(1 + v * v);
    const Real t = v >= 0 ? s + v : 1 / (s - v);
    return {q.x, t / (1 + t)};
}

template <class Real>
PlaneMap<Real> compactify(const dynamics::LiftMap<Real>& f) {
    PlaneMap<Real> h;
    h.name = "compactified " + f.name;
    h.periodic = f.x_period == 1;
    h.forward = [f](Point<Real> q) { return compactify_point(f.forward(decompactify_point(q))); };
    h.inverse = [f](Point<Real> q) { return compactify_point(f.inverse(decompactify_point(q))); };
    return h;
}

template <class Real>
PlaneMap<Real> reflected(const PlaneMap<Real>& h) {
    // Conjugation by (x, y) -> (x, -y); turns downward constructions into upward ones.
    PlaneMap<Real> r;
    r.name = h.name + " (reflected)";
    r.periodic = h.periodic;
    r.forward = [h](Point<Real> p) { const Point<Real> q = h.forward({p.x, -p.y}); return Point<Real>{q.x, -q.y}; };
    r.inverse = [h](Point<Real> p) { const Point<Real> q = h.inverse({p.x, -p.y}); return Point<Real>{q.x, -q.y}; };
    return r;
}

} // namespace flatfix::brouwer
