#pragma once

#include <cstdint>

#include "flatfix/core/point.hpp"

namespace flatfix {

// Radical inverse of i in the given base.
template <class Real>
Real radical_inverse(std::uint64_t i, unsigned base) {
    Real inv = Real(1) / Real(base);
    Real f = inv;
    Real r = 0;
    while (i > 0) {
        r += f * Real(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

// Point i of the 2-d Halton sequence (bases 2, 3) mapped into rect.
template <class Real>
Point<Real> halton_point(std::uint64_t i, Rect<Real> rect) {
    const Real u = radical_inverse<Real>(i + 1, 2);
    const Real v = radical_inverse<Real>(i + 1, 3);
    return {rect.x_min + u * rect.width(), rect.y_min + v * rect.height()};
}

} // namespace flatfix
