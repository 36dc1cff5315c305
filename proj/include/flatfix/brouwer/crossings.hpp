#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "flatfix/brouwer/plane_map.hpp"
#include "flatfix/brouwer/predicates.hpp"
#include "flatfix/core/errors.hpp"
#include "flatfix/core/polyline.hpp"

namespace flatfix::brouwer {

// Vertical translation arc gamma = w h(w) on V_k, with w on V_k ∩ h^{-1}(V_k).
template <class Real>
struct CrossingArc {
    int label{};  // index of the arc on V_0, stable under shifts
    Point<Real> w{};
    Point<Real> w_image{};

    Real y_lo() const { return std::min(w.y, w_image.y); }
    Real y_hi() const { return std::max(w.y, w_image.y); }
    bool contains_interior(Point<Real> p, Real tol) const {
        return std::abs(p.x - w.x) <= tol && p.y > y_lo() + tol && p.y < y_hi() - tol;
    }
    Polyline<Real> polyline() const { return make_segment(w, w_image); }
};

template <class Real>
struct VerticalCrossings {
    int k{};
    Real y_min{}, y_max{};
    std::vector<Point<Real>> w;        // V_k ∩ h^{-1}(V_k), ascending in y
    std::vector<Point<Real>> w_image;  // h(w)
    std::vector<CrossingArc<Real>> arcs;  // minimal arcs only
    bool degenerate() const { return w.empty(); }

    VerticalCrossings shifted(int m) const {
        VerticalCrossings out = *this;
        out.k = k + m;
        const Point<Real> d{Real(m), 0};
        for (auto& p : out.w) p += d;
        for (auto& p : out.w_image) p += d;
        for (auto& a : out.arcs) { a.w += d; a.w_image += d; }
        return out;
    }
};

// Root-finds p1(h(k, y)) - k on [y_min, y_max]. Near-double roots closer
// than the sampling can resolve raise ResolutionLimit. For periodic h the
// result for V_k is the V_0 result shifted, so the equivariance is exact.
template <class Real>
VerticalCrossings<Real> vertical_crossings(const PlaneMap<Real>& h, int k, Real y_min, Real y_max,
                                           Real step = Real(1) / 256, Real tol = Real(1e-12)) {
    if (!h.periodic) throw ConfigError("vertical_crossings: map must be periodic in x");
    if (k != 0) return vertical_crossings(h, 0, y_min, y_max, step, tol).shifted(k);
    VerticalCrossings<Real> out;
    out.k = 0;
    out.y_min = y_min;
    out.y_max = y_max;
    const std::function<Real(Real)> phi = [&](Real y) { return h.forward({0, y}).x; };
    const int n = static_cast<int>(std::ceil((y_max - y_min) / step));
    std::vector<Real> ys(n + 1), vs(n + 1);
    for (int j = 0; j <= n; ++j) {
        ys[j] = std::min(y_max, y_min + Real(j) * step);
        vs[j] = phi(ys[j]);
    }
    auto add_root = [&](Real y) {
        const Point<Real> w{0, y};
        out.w.push_back(w);
        Point<Real> wi = h.forward(w);
        wi.x = 0;  // on V_0 up to the root tolerance
        out.w_image.push_back(wi);
    };
    for (int j = 1; j <= n; ++j) {
        const Real a = vs[j - 1], b = vs[j];
        if (b == 0) { add_root(ys[j]); continue; }
        if (a == 0) continue;
        if ((a > 0) != (b > 0)) {
            add_root(detail::bisect_root<Real>(phi, ys[j - 1], ys[j], a, tol));
            continue;
        }
        if (j < n && (vs[j + 1] > 0) == (b > 0) && std::abs(b) <= std::abs(a) && std::abs(b) <= std::abs(vs[j + 1])) {
            const Real ym = detail::golden_min<Real>(phi, ys[j - 1], ys[j + 1]);
            const Real vm = phi(ym);
            if ((vm > 0) != (b > 0) || std::abs(vm) <= tol * 1e3)
                throw ResolutionLimit("vertical_crossings: crossing multiplicity not resolved near y = " +
                                      std::to_string(static_cast<double>(ym)));
        }
    }
    // Minimal arcs: those not properly containing another.
    std::vector<CrossingArc<Real>> all;
    for (std::size_t i = 0; i < out.w.size(); ++i) all.push_back({0, out.w[i], out.w_image[i]});
    int label = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        bool minimal = true;
        for (std::size_t j = 0; j < all.size() && minimal; ++j) {
            if (i == j) continue;
            const bool inside = all[j].y_lo() >= all[i].y_lo() && all[j].y_hi() <= all[i].y_hi();
            const bool equal = all[j].y_lo() == all[i].y_lo() && all[j].y_hi() == all[i].y_hi();
            if (inside && !equal) minimal = false;
        }
        if (minimal) {
            all[i].label = label++;
            out.arcs.push_back(all[i]);
        }
    }
    return out;
}

} // namespace flatfix::brouwer
