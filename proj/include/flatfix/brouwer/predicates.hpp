#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "flatfix/brouwer/plane_map.hpp"
#include "flatfix/brouwer/sampling.hpp"
#include "flatfix/core/errors.hpp"
#include "flatfix/core/polyline.hpp"

namespace flatfix::brouwer {

// alpha(1) = h(alpha(0)) and alpha meets h(alpha) only at that point.
template <class Real>
bool is_translation_arc(const PlaneMap<Real>& h, const Polyline<Real>& alpha, Real tol, Real resolution = 0) {
    if (alpha.closed || alpha.start_ray || alpha.end_ray || alpha.vertices.size() < 2)
        throw ConfigError("is_translation_arc: alpha must be a finite open arc");
    const Point<Real> hz = h(alpha.front());
    if (distance(hz, alpha.back()) > tol) return false;
    if (resolution <= 0) resolution = alpha.length() / 512;
    const auto img = sample_image<Real>(h.forward, alpha, resolution);
    const Real joint = 2 * resolution + tol;
    for (const auto& hit : intersections(alpha, img.image, tol)) {
        if (distance(hit.hit.point, hz) <= joint) continue;
        if (hit.hit.grazing)
            throw SamplingInconclusive("is_translation_arc: near contact between alpha and h(alpha)");
        return false;
    }
    return true;
}

enum class AbutCase { inverse_image, direct_image, none };

inline const char* to_string(AbutCase c) {
    switch (c) {
        case AbutCase::inverse_image: return "i";
        case AbutCase::direct_image: return "ii";
        default: return "iii";
    }
}

template <class Real>
struct AbutParams {
    Real t_max = 16;
    Real step = Real(1) / 64;
    Real resolution = Real(1) / 512;  // image sampling
    Real tol = Real(1e-12);           // root location, relative to max(1, t)
    Real tangency_tol = Real(1e-9);   // |cross-track| below this without a sign change is a tangency
};

// The arc prefix + [origin, origin + t dir] first meets m(arc) at its far end c = origin + t* dir.
// inverse_image: h(c) lies on the arc (case i); direct_image: h^{-1}(c) does (case ii).
template <class Real>
struct AbutEvent {
    AbutCase kind = AbutCase::none;
    Real t_star{};          // ray parameter of P
    Point<Real> P{};
    Point<Real> P_prime{};  // h(P) in case i, h^{-1}(P) in case ii
    Real s_prime{};         // arc length of P' from the start of the arc
};

namespace detail {

template <class Real>
Real bisect_root(const std::function<Real(Real)>& c, Real lo, Real hi, Real clo, Real tol) {
    for (int it = 0; it < 200 && hi - lo > tol * std::max(Real(1), std::abs(hi)); ++it) {
        const Real mid = (lo + hi) / 2;
        const Real cm = c(mid);
        if (cm == 0) return mid;
        if ((cm > 0) == (clo > 0)) { lo = mid; clo = cm; } else hi = mid;
    }
    return (lo + hi) / 2;
}

// Golden-section minimisation of |c| on [lo, hi]; returns the argmin.
template <class Real>
Real golden_min(const std::function<Real(Real)>& c, Real lo, Real hi) {
    const Real g = (std::sqrt(Real(5)) - 1) / 2;
    Real a = lo, b = hi;
    Real x1 = b - g * (b - a), x2 = a + g * (b - a);
    Real f1 = std::abs(c(x1)), f2 = std::abs(c(x2));
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = std::abs(c(x1)); }
        else { a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = std::abs(c(x2)); }
    }
    return (a + b) / 2;
}

// A candidate contact of m(ray(t)) with a straight piece of the arc.
template <class Real>
struct LineContact {
    Real t;
    Real along;  // position of m(ray(t)) along the piece, in its own arc length
};

// Scans t in (0, t_max] for zeros of the signed distance of m(origin + t dir)
// to the line through `a` with unit direction `u`, keeping those whose
// along-line coordinate s lies in (lo, hi(t)) (or [lo, hi(t)) when lo_closed).
// A zero with s at an open lo is the arc's own base point and is ambiguous.
template <class Real, class Hi>
std::optional<LineContact<Real>> first_line_contact(const std::function<Point<Real>(Point<Real>)>& m, Point<Real> origin,
                                                    Point<Real> dir, Point<Real> a, Point<Real> u, Real lo,
                                                    bool lo_closed, Hi hi, const AbutParams<Real>& prm) {
    const Point<Real> nrm = perp(u);
    const std::function<Real(Real)> cross_track = [&](Real t) { return dot(nrm, m(origin + t * dir) - a); };
    auto along = [&](Real t) { return dot(u, m(origin + t * dir) - a); };
    auto classify = [&](Real t) -> std::optional<LineContact<Real>> {
        const Real s = along(t);
        const Real eps = prm.tangency_tol * std::max(Real(1), std::abs(s));
        if (std::abs(s - lo) <= eps) {
            if (!lo_closed) throw TangencyAmbiguous("abutment: image passes through the base point of the arc");
            return LineContact<Real>{t, s};
        }
        if (s > lo && s < hi(t)) return LineContact<Real>{t, s};
        return std::nullopt;
    };

    const int n = static_cast<int>(std::ceil(prm.t_max / prm.step));
    std::vector<Real> ts(n + 1), cs(n + 1);
    for (int j = 0; j <= n; ++j) {
        ts[j] = std::min(prm.t_max, Real(j) * prm.step);
        cs[j] = cross_track(ts[j]);
    }
    auto sgn = [](Real v) { return (v > 0) - (v < 0); };
    for (int j = 1; j <= n; ++j) {
        const int sp = sgn(cs[j - 1]), sc = sgn(cs[j]);
        if (sc == 0) {
            // Exact zero on a sample: a touch if the neighbours agree in sign.
            const int sn = j < n ? sgn(cs[j + 1]) : -sp;
            if (sp != 0 && sp == sn) {
                if (classify(ts[j])) throw TangencyAmbiguous("abutment: image touches the arc tangentially");
                continue;
            }
            if (auto r = classify(ts[j])) return r;
            continue;
        }
        if (sp == 0) continue;  // handled on the previous sample
        if (sp != sc) {
            if (auto r = classify(bisect_root<Real>(cross_track, ts[j - 1], ts[j], cs[j - 1], prm.tol))) return r;
            continue;
        }
        // Same sign on both ends: look for a hidden double crossing or a touch
        // around a local minimum of |c| at sample j.
        if (j < n && sgn(cs[j + 1]) == sc && std::abs(cs[j]) <= std::abs(cs[j - 1]) &&
            std::abs(cs[j]) <= std::abs(cs[j + 1])) {
            const Real tm = golden_min<Real>(cross_track, ts[j - 1], ts[j + 1]);
            const Real cm = cross_track(tm);
            if (sgn(cm) != sc) {
                if (auto r = classify(bisect_root<Real>(cross_track, ts[j - 1], tm, cs[j - 1], prm.tol))) return r;
                if (auto r = classify(bisect_root<Real>(cross_track, tm, ts[j + 1], cm, prm.tol))) return r;
            } else if (std::abs(cm) <= prm.tangency_tol && classify(tm)) {
                throw TangencyAmbiguous("abutment: image touches the arc tangentially at t = " +
                                        std::to_string(static_cast<double>(tm)));
            }
        }
    }
    return std::nullopt;
}

} // namespace detail

// First abutment of the arc prefix ∪ [origin, origin + t dir] (t ≤ t_max) on
// its image or inverse image. The prefix must be a finite polyline ending at
// origin (empty for a bare ray); it is assumed not to abut on itself.
template <class Real>
std::optional<AbutEvent<Real>> first_abutment(const PlaneMap<Real>& h, const Polyline<Real>& prefix, Point<Real> origin,
                                              Point<Real> dir, const AbutParams<Real>& prm) {
    dir = dir / norm(dir);
    const Real prefix_len = prefix.length();
    std::optional<AbutEvent<Real>> best;
    auto offer = [&](AbutCase kind, Real t, Real s_prime) {
        if (best && best->t_star <= t) return;
        AbutEvent<Real> e;
        e.kind = kind;
        e.t_star = t;
        e.P = origin + t * dir;
        e.P_prime = kind == AbutCase::inverse_image ? h.forward(e.P) : h.inverse(e.P);
        e.s_prime = s_prime;
        best = e;
    };
    for (AbutCase kind : {AbutCase::inverse_image, AbutCase::direct_image}) {
        const auto& m = kind == AbutCase::inverse_image ? h.forward : h.inverse;
        // Contacts with the ray itself behind the current point.
        auto own = detail::first_line_contact<Real>(m, origin, dir, origin, dir, Real(0), prefix_len > 0,
                                                    [](Real t) { return t; }, prm);
        if (own) offer(kind, own->t, prefix_len + own->along);
        // Contacts with each straight piece of the prefix.
        Real offset = 0;
        for (std::size_t i = 0; i < prefix.segment_count(); ++i) {
            const auto seg = prefix.segment(i);
            const Real len = seg.length();
            const Point<Real> u = (seg.b - seg.a) / len;
            auto c = detail::first_line_contact<Real>(m, origin, dir, seg.a, u, Real(0), i > 0,
                                                      [len](Real) { return len; }, prm);
            if (c) offer(kind, c->t, offset + c->along);
            offset += len;
        }
    }
    return best;
}

template <class Real>
struct AbutReport {
    AbutCase kind = AbutCase::none;
    std::optional<AbutEvent<Real>> event;
    Polyline<Real> translation_arc;  // PP' from P' to P in cases i and ii
    bool horizon = false;             // case iii certified only on [0, t_max]
    Real t_max{};
};

namespace detail {

// Does the image of the ray segment [origin + t0 dir, origin + t1 dir] meet the obstacle polyline?
template <class Real>
bool image_meets(const std::function<Point<Real>(Point<Real>)>& m, Point<Real> origin, Point<Real> dir, Real t0,
                 Real t1, const Polyline<Real>& obstacle, const AbutParams<Real>& prm) {
    if (t1 <= t0 || obstacle.segment_count() == 0) return false;
    const auto img = sample_image<Real>(m, make_segment(origin + t0 * dir, origin + t1 * dir), prm.resolution);
    return !intersections(img.image, obstacle, prm.tangency_tol).empty();
}

template <class Real>
Polyline<Real> concat(const Polyline<Real>& a, const Polyline<Real>& b) {
    Polyline<Real> out = a;
    for (const auto& v : b.vertices) out.append(v);
    return out;
}

} // namespace detail

// Classifies the upward vertical ray from B against cases i, ii, iii.
template <class Real>
AbutReport<Real> abut_classify(const PlaneMap<Real>& h, const Polyline<Real>& AB, const Polyline<Real>& BC,
                               Point<Real> B, const AbutParams<Real>& prm, Point<Real> dir = {0, 1}) {
    dir = dir / norm(dir);
    AbutReport<Real> rep;
    rep.t_max = prm.t_max;
    rep.event = first_abutment(h, Polyline<Real>{}, B, dir, prm);
    // The part of the ray in use must leave B without meeting AB or BC again.
    const Real reach = rep.event ? rep.event->t_star : prm.t_max;
    const auto probe = make_segment(B, B + reach * dir);
    for (const auto* arc : {&AB, &BC}) {
        for (const auto& hit : intersections(probe, *arc, prm.tangency_tol)) {
            if (distance(hit.hit.point, B) > prm.tangency_tol * 16)
                throw ConfigError("abut_classify: the ray from B meets AB or BC away from B");
        }
    }
    if (rep.event) {
        rep.kind = rep.event->kind;
        rep.translation_arc = make_segment(B + rep.event->s_prime * dir, rep.event->P);
        return rep;
    }
    // Case iii: images of the open ray avoid AB and BC within the horizon.
    const Polyline<Real> ABC = detail::concat(AB, BC);
    const Real t0 = std::max(prm.resolution, prm.step / 8);
    for (const auto& m : {h.inverse, h.forward}) {
        if (detail::image_meets<Real>(m, B, dir, t0, prm.t_max, ABC, prm))
            throw HorizonReached("abut_classify: no abutment before t_max but case iii disjointness fails");
    }
    for (const auto& hit : intersections(make_segment(B + t0 * dir, B + prm.t_max * dir), ABC, prm.tangency_tol)) {
        (void)hit;
        throw HorizonReached("abut_classify: ray meets AB or BC");
    }
    rep.kind = AbutCase::none;
    rep.horizon = true;
    return rep;
}

} // namespace flatfix::brouwer
