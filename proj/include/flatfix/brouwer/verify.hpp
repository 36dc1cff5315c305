#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "flatfix/brouwer/plane_map.hpp"
#include "flatfix/brouwer/sampling.hpp"
#include "flatfix/core/errors.hpp"
#include "flatfix/core/polyline.hpp"

namespace flatfix::brouwer {

template <class Real>
struct BrouwerLineReport {
    bool disjoint = false;          // h(L) ∩ L = ∅ inside the window
    bool sides_separated = false;   // h(L) and h^{-1}(L) on opposite sides
    bool passed() const { return disjoint && sides_separated; }
    std::size_t samples = 0;
    Real resolution{};
    Rect<Real> window{};
    std::string detail;
};

namespace detail {

template <class Real>
bool in_rect(Point<Real> p, const Rect<Real>& r) {
    return p.x >= r.x_min && p.x <= r.x_max && p.y >= r.y_min && p.y <= r.y_max;
}

template <class Real>
int crossing_parity(Point<Real> p, Point<Real> far, const Polyline<Real>& L_long) {
    int count = 0;
    const Segment<Real> s{p, far};
    for (std::size_t i = 0; i < L_long.segment_count(); ++i)
        if (auto hit = intersect(s, L_long.segment(i), Real(0)); hit && !hit->grazing) ++count;
    return count & 1;
}

} // namespace detail

// Certifies within `window` that L is a Brouwer line: h(L) misses L, and the
// sampled points of h(L) and h^{-1}(L) sit on opposite sides of L, decided by
// the parity of crossings along a segment to a far reference point.
template <class Real>
BrouwerLineReport<Real> verify_brouwer_line(const PlaneMap<Real>& h, const Polyline<Real>& L, const Rect<Real>& window,
                                            Real resolution) {
    if (!L.start_ray || !L.end_ray)
        throw ProperEndsUnresolved("verify_brouwer_line: L has a finite end; behaviour beyond the window [" +
                                   std::to_string(static_cast<double>(window.x_min)) + ", " +
                                   std::to_string(static_cast<double>(window.x_max)) + "] x [" +
                                   std::to_string(static_cast<double>(window.y_min)) + ", " +
                                   std::to_string(static_cast<double>(window.y_max)) + "] cannot be certified");
    BrouwerLineReport<Real> rep;
    rep.resolution = resolution;
    rep.window = window;

    Real spread = 0;
    for (const auto& v : L.vertices) spread = std::max(spread, distance(v, window.center()));
    const Real reach = std::hypot(window.width(), window.height()) + spread;
    const Polyline<Real> Lw = L.truncated(reach);
    const Polyline<Real> L_long = L.truncated(reach * 1000);

    const auto fwd = sample_image<Real>(h.forward, Lw, resolution);
    const auto bwd = sample_image<Real>(h.inverse, Lw, resolution);

    rep.disjoint = true;
    for (const auto& hit : intersections(fwd.image, Lw, Real(0))) {
        if (detail::in_rect(hit.hit.point, window)) {
            rep.disjoint = false;
            rep.detail = "h(L) meets L at (" + std::to_string(static_cast<double>(hit.hit.point.x)) + ", " +
                         std::to_string(static_cast<double>(hit.hit.point.y)) + ")";
            break;
        }
    }

    const Real ang = Real(0.6180339887);
    const Point<Real> far = window.center() + reach * 100 * Point<Real>{std::cos(ang), std::sin(ang)};
    int fwd_side = -1, bwd_side = -1;
    bool consistent = true;
    auto scan = [&](const Polyline<Real>& img, int& side) {
        for (const auto& p : img.vertices) {
            if (!detail::in_rect(p, window)) continue;
            ++rep.samples;
            const int par = detail::crossing_parity(p, far, L_long);
            if (side < 0) side = par;
            else if (side != par) consistent = false;
        }
    };
    scan(fwd.image, fwd_side);
    scan(bwd.image, bwd_side);
    rep.sides_separated = consistent && fwd_side >= 0 && bwd_side >= 0 && fwd_side != bwd_side;
    if (!rep.sides_separated && rep.detail.empty())
        rep.detail = consistent ? "h(L) and h^-1(L) on the same side" : "image samples on both sides of L";
    return rep;
}

// h(L) ∩ L = ∅ inside the window for a half line or finite polyline; rays are
// followed until they leave the window.
template <class Real>
bool image_disjoint(const PlaneMap<Real>& h, const Polyline<Real>& L, const Rect<Real>& window, Real resolution) {
    Real spread = 0;
    for (const auto& v : L.vertices) spread = std::max(spread, distance(v, window.center()));
    const Polyline<Real> Lw = L.truncated(std::hypot(window.width(), window.height()) + spread);
    const auto img = sample_image<Real>(h.forward, Lw, resolution);
    for (const auto& hit : intersections(img.image, Lw, Real(0)))
        if (detail::in_rect(hit.hit.point, window)) return false;
    return true;
}

} // namespace flatfix::brouwer
