#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>

namespace flatfix {

template <std::floating_point Real>
struct Point {
    Real x{};
    Real y{};

    constexpr Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
    constexpr Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator-(Point a) { return {-a.x, -a.y}; }
    friend constexpr Point operator*(Real s, Point a) { return {s * a.x, s * a.y}; }
    friend constexpr Point operator*(Point a, Real s) { return {s * a.x, s * a.y}; }
    friend constexpr Point operator/(Point a, Real s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Point, Point) = default;
};

template <class Real>
Real dot(Point<Real> a, Point<Real> b) { return a.x * b.x + a.y * b.y; }

template <class Real>
Real cross(Point<Real> a, Point<Real> b) { return a.x * b.y - a.y * b.x; }

template <class Real>
Real norm(Point<Real> a) { return std::hypot(a.x, a.y); }

template <class Real>
Real sup_norm(Point<Real> a) { return std::max(std::abs(a.x), std::abs(a.y)); }

template <class Real>
Real distance(Point<Real> a, Point<Real> b) { return norm(a - b); }

template <class Real>
Point<Real> perp(Point<Real> a) { return {-a.y, a.x}; }

template <class Real>
bool is_finite(Point<Real> a) { return std::isfinite(a.x) && std::isfinite(a.y); }

// Closed axis-aligned rectangle; infinite bounds are allowed.
template <std::floating_point Real>
struct Rect {
    Real x_min{};
    Real x_max{};
    Real y_min{};
    Real y_max{};

    static constexpr Rect strip() {
        constexpr Real inf = std::numeric_limits<Real>::infinity();
        return {-inf, inf, Real(0), Real(1)};
    }

    constexpr bool contains(Point<Real> p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    constexpr Real width() const { return x_max - x_min; }
    constexpr Real height() const { return y_max - y_min; }
    constexpr Point<Real> center() const { return {(x_min + x_max) / 2, (y_min + y_max) / 2}; }
    constexpr Rect shifted(Point<Real> d) const {
        return {x_min + d.x, x_max + d.x, y_min + d.y, y_max + d.y};
    }
    constexpr Rect inflated(Real r) const { return {x_min - r, x_max + r, y_min - r, y_max + r}; }
};

// Row-major 2x2 matrix [[a, b], [c, d]].
template <std::floating_point Real>
struct Mat2 {
    Real a{}, b{}, c{}, d{};

    constexpr Real det() const { return a * d - b * c; }
    constexpr Point<Real> operator*(Point<Real> v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    static constexpr Mat2 identity() { return {1, 0, 0, 1}; }
};

} // namespace flatfix
