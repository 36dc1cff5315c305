#pragma once

#include <cmath>

#include "flatfix/core/point.hpp"

namespace flatfix::dynamics {

// Symmetric eigen-decomposition of J^T J for a 2x2 J, computed on a rescaled
// copy so that entries far below 1e-2000 do not underflow when squared.
template <class Real>
struct Svd2 {
    Real sigma_max{};
    Real sigma_min{};
    Point<Real> v_max{1, 0};  // right singular vectors
    Point<Real> v_min{0, 1};
    Real scale{};             // max |J_ij|

    Real ratio() const { return sigma_max > 0 ? sigma_min / sigma_max : Real(0); }
};

template <class Real>
Svd2<Real> svd2(const Mat2<Real>& J) {
    Svd2<Real> out;
    out.scale = std::max({std::abs(J.a), std::abs(J.b), std::abs(J.c), std::abs(J.d)});
    if (!(out.scale > 0)) return out;
    const Real a = J.a / out.scale, b = J.b / out.scale, c = J.c / out.scale, d = J.d / out.scale;
    const Real p = a * a + c * c, q = a * b + c * d, r = b * b + d * d;
    const Real mean = (p + r) / 2;
    const Real rad = std::hypot((p - r) / 2, q);
    const Real l1 = mean + rad;
    const Real l2 = std::max(Real(0), (p * r - q * q) / l1);  // stable small eigenvalue
    Point<Real> v1;
    if (q != 0) {
        v1 = (p >= r) ? Point<Real>{l1 - r, q} : Point<Real>{q, l1 - p};
        v1 = v1 / norm(v1);
    } else {
        v1 = p >= r ? Point<Real>{1, 0} : Point<Real>{0, 1};
    }
    out.v_max = v1;
    out.v_min = perp(v1);
    out.sigma_max = std::sqrt(l1) * out.scale;
    out.sigma_min = std::sqrt(l2) * out.scale;
    return out;
}

// Minimum-norm least-squares solution of J s = rhs, discarding singular
// directions below rcond * sigma_max.
template <class Real>
Point<Real> pinv_solve(const Mat2<Real>& J, Point<Real> rhs, Real rcond = Real(1e-10)) {
    const Svd2<Real> s = svd2(J);
    if (!(s.scale > 0)) return {0, 0};
    const Real a = J.a / s.scale, b = J.b / s.scale, c = J.c / s.scale, d = J.d / s.scale;
    const Point<Real> jt_rhs{(a * rhs.x + c * rhs.y), (b * rhs.x + d * rhs.y)};  // (J/scale)^T rhs
    Point<Real> out{0, 0};
    const Real s1 = s.sigma_max / s.scale, s2 = s.sigma_min / s.scale;
    out += (dot(s.v_max, jt_rhs) / (s1 * s1)) * s.v_max;
    if (s2 > rcond * s1) out += (dot(s.v_min, jt_rhs) / (s2 * s2)) * s.v_min;
    return out / s.scale;
}

} // namespace flatfix::dynamics
