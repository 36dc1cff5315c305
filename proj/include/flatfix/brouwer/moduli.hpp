#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "flatfix/brouwer/plane_map.hpp"
#include "flatfix/core/errors.hpp"

namespace flatfix::brouwer {

template <class Real>
struct Moduli {
    int n{};
    Real eps_n{};
    Real eta_n{};
    Real grid_step{};
};

// eps_n: least displacement of h and h^{-1} over the grid on R_n = [-n,n]^2.
// eta_n: largest dyadic t <= eps_n/2 with |h(x)-h(y)|, |h^{-1}(x)-h^{-1}(y)| <= eps_n/2
// for grid nodes x and partners y = x + t e, e in 8 directions.
// Grid nodes are integer multiples of grid_step, so the grids on R_n are nested.
// For periodic maps the x-range reduces to one period.
template <class Real>
Moduli<Real> moduli(const PlaneMap<Real>& h, int n, Real grid_step) {
    if (n < 1) throw ConfigError("moduli: n must be >= 1");
    if (!(grid_step > 0)) throw ConfigError("moduli: grid_step must be positive");
    const long long jy = static_cast<long long>(std::floor(n / grid_step));
    const long long jx = h.periodic ? static_cast<long long>(std::ceil(1 / grid_step)) : jy;
    const long long ix0 = h.periodic ? 0 : -jx;

    Moduli<Real> out;
    out.n = n;
    out.grid_step = grid_step;
    Real eps = std::numeric_limits<Real>::infinity();
    for (long long i = ix0; i <= jx; ++i)
        for (long long j = -jy; j <= jy; ++j) {
            const Point<Real> p{Real(i) * grid_step, Real(j) * grid_step};
            eps = std::min({eps, distance(h.forward(p), p), distance(h.inverse(p), p)});
        }
    out.eps_n = eps;

    const Real half = eps / 2;
    const Real slack = half * Real(1e-9);  // partners are placed with rounded cos/sin
    Real t = std::exp2(std::floor(std::log2(half)));
    auto continuity_holds = [&](Real t) {
        for (int d = 0; d < 8; ++d) {
            const Real a = Real(d) * std::numbers::pi_v<Real> / 4;
            const Point<Real> e{t * std::cos(a), t * std::sin(a)};
            for (long long i = ix0; i <= jx; ++i)
                for (long long j = -jy; j <= jy; ++j) {
                    const Point<Real> p{Real(i) * grid_step, Real(j) * grid_step};
                    const Point<Real> q = p + e;
                    if (!h.periodic && (std::abs(q.x) > n || std::abs(q.y) > n)) continue;
                    if (std::abs(q.y) > n) continue;
                    if (distance(h.forward(p), h.forward(q)) > half + slack) return false;
                    if (distance(h.inverse(p), h.inverse(q)) > half + slack) return false;
                }
        }
        return true;
    };
    while (t > std::ldexp(Real(1), -40) && !continuity_holds(t)) t /= 2;
    out.eta_n = t;
    return out;
}

} // namespace flatfix::brouwer
