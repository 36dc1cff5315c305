#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "flatfix/core/errors.hpp"
#include "flatfix/core/polyline.hpp"
#include "flatfix/dynamics/lift_map.hpp"

namespace flatfix::dynamics {

// Winding number of a planar vector field along a closed polyline, with
// every accumulated angle increment kept below pi/2 by bisection.
template <class Real>
int winding_number(const std::function<Point<Real>(Point<Real>)>& field, const Polyline<Real>& loop,
                   int samples_per_segment = 16, int max_depth = 40) {
    if (!loop.closed || loop.vertices.size() < 3) throw ConfigError("winding_number: loop must be closed");
    const Real quarter = std::numbers::pi_v<Real> / 2;
    auto value = [&](Point<Real> z) {
        const Point<Real> v = field(z);
        if (!(norm(v) > 0) || !is_finite(v))
            throw DisplacementVanishesOnLoop("displacement vanishes on the loop");
        return v;
    };
    Real total = 0;
    std::function<void(Point<Real>, Point<Real>, Point<Real>, Point<Real>, int)> walk =
        [&](Point<Real> a, Point<Real> b, Point<Real> va, Point<Real> vb, int depth) {
            const Real turn = std::atan2(cross(va, vb), dot(va, vb));
            if (std::abs(turn) < quarter) {
                total += turn;
                return;
            }
            if (depth >= max_depth)
                throw DisplacementVanishesOnLoop("argument increment unresolved; displacement nearly vanishes");
            const Point<Real> m = (a + b) / Real(2);
            const Point<Real> vm = value(m);
            walk(a, m, va, vm, depth + 1);
            walk(m, b, vm, vb, depth + 1);
        };
    for (std::size_t s = 0; s < loop.segment_count(); ++s) {
        const auto seg = loop.segment(s);
        Point<Real> prev = seg.a;
        Point<Real> vprev = value(prev);
        for (int k = 1; k <= samples_per_segment; ++k) {
            const Point<Real> z = seg.at(Real(k) / Real(samples_per_segment));
            const Point<Real> vz = value(z);
            walk(prev, z, vprev, vz, 0);
            prev = z;
            vprev = vz;
        }
    }
    return static_cast<int>(std::lround(total / (2 * std::numbers::pi_v<Real>)));
}

template <class Real>
int fixed_point_index(const LiftMap<Real>& f_eps, const Polyline<Real>& loop, int samples_per_segment = 16) {
    return winding_number<Real>([&](Point<Real> z) { return f_eps.displacement(z); }, loop, samples_per_segment);
}

} // namespace flatfix::dynamics
