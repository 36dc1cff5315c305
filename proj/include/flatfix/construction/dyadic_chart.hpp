#pragma once

#include <cmath>
#include <optional>

#include "flatfix/core/point.hpp"

namespace flatfix::construction {

// t_k(x, y) = (2^{k+2} x, 2^{k+2} y - 3), sending the band
// R x (2^{-(k+1)}, 2^{-k}] onto R x (-1, 1] and p_k = (0, 3 2^{-(k+2)}) to 0.
template <class Real>
struct DyadicChart {
    int k = 0;

    Real scale() const { return std::ldexp(Real(1), k + 2); }
    Point<Real> forward(Point<Real> p) const { return {scale() * p.x, scale() * p.y - 3}; }
    Point<Real> inverse(Point<Real> q) const { return {q.x / scale(), (q.y + 3) / scale()}; }

    Point<Real> center() const { return {0, 3 / scale()}; }
    Real support_radius() const { return std::ldexp(Real(1), -(k + 3)); }
    Real inner_radius() const { return std::ldexp(Real(1), -(k + 4)); }
};

// Band index k with y in (2^{-(k+1)}, 2^{-k}]; empty for y <= 0 or y > 1.
template <class Real>
std::optional<int> band_of(Real y) {
    if (!(y > 0) || y > 1) return std::nullopt;
    int e = 0;
    const Real m = std::frexp(y, &e);  // y = m 2^e, m in [1/2, 1)
    return m == Real(0.5) ? 1 - e : -e;
}

} // namespace flatfix::construction
