#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "flatfix/brouwer/plane_map.hpp"
#include "flatfix/core/errors.hpp"
#include "flatfix/core/polyline.hpp"
#include "flatfix/dynamics/reference_maps.hpp"

namespace flatfix::brouwer {

template <class Real>
PlaneMap<Real> translation(Real dx, Real dy = 0) {
    PlaneMap<Real> h;
    h.name = "translation";
    h.periodic = true;
    h.forward = [dx, dy](Point<Real> p) { return Point<Real>{p.x + dx, p.y + dy}; };
    h.inverse = [dx, dy](Point<Real> p) { return Point<Real>{p.x - dx, p.y - dy}; };
    return h;
}

// (x, y) -> (x + 1 - 2y, y - 1/10): the upward ray from the origin first
// abuts on its inverse image at t* = 1/2.
template <class Real>
PlaneMap<Real> tilted_shift() {
    PlaneMap<Real> h;
    h.name = "tilted-shift";
    h.periodic = true;
    h.forward = [](Point<Real> p) { return Point<Real>{p.x + 1 - 2 * p.y, p.y - Real(0.1)}; };
    h.inverse = [](Point<Real> q) {
        const Real y = q.y + Real(0.1);
        return Point<Real>{q.x - 1 + 2 * y, y};
    };
    return h;
}

// (x, y) -> (x + (y - 1/2)^2, y - 1/10): h of the upward ray from the origin
// touches the ray at height 2/5 without crossing it.
template <class Real>
PlaneMap<Real> tangent_shift() {
    PlaneMap<Real> h;
    h.name = "tangent-shift";
    h.periodic = true;
    h.forward = [](Point<Real> p) {
        const Real s = p.y - Real(0.5);
        return Point<Real>{p.x + s * s, p.y - Real(0.1)};
    };
    h.inverse = [](Point<Real> q) {
        const Real y = q.y + Real(0.1);
        const Real s = y - Real(0.5);
        return Point<Real>{q.x - s * s, y};
    };
    return h;
}

// (x, y) -> (x + (y^2 - 1)/2, y + 1/4): p1 h - x vanishes on every vertical
// exactly at y = -1 and y = 1.
template <class Real>
PlaneMap<Real> two_crossing() {
    PlaneMap<Real> h;
    h.name = "two-crossing";
    h.periodic = true;
    h.forward = [](Point<Real> p) { return Point<Real>{p.x + (p.y * p.y - 1) / 2, p.y + Real(0.25)}; };
    h.inverse = [](Point<Real> q) {
        const Real y = q.y - Real(0.25);
        return Point<Real>{q.x - (y * y - 1) / 2, y};
    };
    return h;
}

template <class Real>
PlaneMap<Real> compactified_shear() {
    auto h = compactify(dynamics::shear_map<Real>());
    h.name = "compactified-shear";
    return h;
}

// Composition of three shears,
//   xi = x + kappa y,  eta = y + b(xi),  X = xi + c0 - kappa eta,
// with b(xi) = beta sin(2 pi xi). The displacement (c0 - kappa b(xi), b(xi))
// depends on xi only and never vanishes for c0 != 0. A horizontal ray abuts
// after a run in (c0, c0 + 1/2], so for c0 > 1 it always crosses an integer
// vertical first; kappa beta > c0 gives vertical translation arcs of length
// c0 / kappa on every V_k.
template <class Real>
struct ShearChainParams {
    Real c0 = Real(1.5);
    Real kappa = 1;
    Real beta = 2;
};

template <class Real>
PlaneMap<Real> shear_chain(ShearChainParams<Real> s = {}) {
    constexpr Real tau = 2 * std::numbers::pi_v<Real>;
    PlaneMap<Real> h;
    h.name = "shear-chain";
    h.periodic = true;
    h.forward = [s](Point<Real> p) {
        const Real xi = p.x + s.kappa * p.y;
        const Real eta = p.y + s.beta * std::sin(tau * xi);
        return Point<Real>{xi + s.c0 - s.kappa * eta, eta};
    };
    h.inverse = [s](Point<Real> q) {
        const Real xi = q.x - s.c0 + s.kappa * q.y;
        const Real y = q.y - s.beta * std::sin(tau * xi);
        return Point<Real>{xi - s.kappa * y, y};
    };
    return h;
}

template <class Real>
std::vector<std::string> catalog_names() {
    return {"translation", "tilted-shift", "tangent-shift", "two-crossing", "compactified-shear", "shear-chain"};
}

template <class Real>
PlaneMap<Real> catalog_map(const std::string& name) {
    if (name == "translation") return translation<Real>(1);
    if (name == "tilted-shift") return tilted_shift<Real>();
    if (name == "tangent-shift") return tangent_shift<Real>();
    if (name == "two-crossing") return two_crossing<Real>();
    if (name == "compactified-shear") return compactified_shear<Real>();
    if (name == "shear-chain") return shear_chain<Real>();
    throw ConfigError("unknown catalog map '" + name + "'");
}

// Lowest level y0 on the grid [y_min, y_max] such that p1 h(x, y) > x and
// p1 h^{-1}(x, y) < x at all sampled points with y0 <= y <= y_max.
template <class Real>
std::optional<Real> twist_level(const PlaneMap<Real>& h, Real y_min, Real y_max, Real y_step = Real(1) / 16,
                                int x_samples = 64) {
    std::optional<Real> level;
    const int n = static_cast<int>(std::floor((y_max - y_min) / y_step));
    for (int j = n; j >= 0; --j) {
        const Real y = y_min + Real(j) * y_step;
        for (int i = 0; i < x_samples; ++i) {
            const Point<Real> p{Real(i) / Real(x_samples), y};
            if (!(h.forward(p).x > p.x) || !(h.inverse(p).x < p.x)) return level;
        }
        level = y;
    }
    return level;
}

// A catalog map with a starting translation arc AB, B = h(A), and the
// direction of the first ray.
template <class Real>
struct BrouwerFixture {
    PlaneMap<Real> h;
    Polyline<Real> AB;
    Point<Real> B{};
    Point<Real> start_dir{0, 1};
    bool use_twist_level = false;
};

template <class Real>
BrouwerFixture<Real> brouwer_fixture(const std::string& name) {
    BrouwerFixture<Real> f;
    f.h = catalog_map<Real>(name);
    auto straight = [&](Point<Real> A) {
        f.B = f.h.forward(A);
        f.AB = make_segment(A, f.B);
    };
    if (name == "translation") straight({0, 0});
    else if (name == "tilted-shift") straight(f.h.inverse({0, 0}));
    else if (name == "tangent-shift") straight(f.h.inverse({0, 0}));
    else if (name == "two-crossing") straight({0, 0});
    else if (name == "compactified-shear") {
        straight({0, 0});
        f.use_twist_level = true;
    } else if (name == "shear-chain") {
        // AB is the lowest vertical translation arc on V_0 above y = -3; the
        // vertical through its end contains AB, so the first ray is horizontal.
        const Real c0 = 1.5, kappa = 1, beta = 2;
        const Real y = (std::asin(c0 / (kappa * beta)) / (2 * std::numbers::pi_v<Real>)) - 3;
        const Point<Real> w{0, y};
        f.B = f.h.forward(w);
        f.B.x = 0;
        f.AB = make_segment(w, f.B);
        f.start_dir = {-1, 0};
    }
    return f;
}

} // namespace flatfix::brouwer
