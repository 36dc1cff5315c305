#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "flatfix/core/errors.hpp"
#include "flatfix/core/point.hpp"

namespace flatfix {

template <class Real>
struct Segment {
    Point<Real> a;
    Point<Real> b;

    Point<Real> at(Real t) const { return a + t * (b - a); }
    Real length() const { return distance(a, b); }
};

template <class Real>
struct SegmentHit {
    Real t{};        // parameter on the first segment
    Real u{};        // parameter on the second segment
    Point<Real> point{};
    bool grazing = false;   // the segments only come within tol of each other
    bool collinear = false;
};

template <class Real>
Real distance_to_segment(Point<Real> p, Segment<Real> s, Real* param = nullptr) {
    const Point<Real> d = s.b - s.a;
    const Real len2 = dot(d, d);
    Real t = len2 > 0 ? dot(p - s.a, d) / len2 : Real(0);
    t = std::clamp(t, Real(0), Real(1));
    if (param) *param = t;
    return distance(p, s.at(t));
}

// Intersection of two closed segments. A transversal crossing is reported
// with grazing = false; when the segments do not cross but pass within tol
// of each other the closest pair is reported with grazing = true.
template <class Real>
std::optional<SegmentHit<Real>> intersect(Segment<Real> s1, Segment<Real> s2, Real tol) {
    const Point<Real> r = s1.b - s1.a;
    const Point<Real> q = s2.b - s2.a;
    const Point<Real> w = s2.a - s1.a;
    const Real denom = cross(r, q);
    const Real scale = std::max(norm(r) * norm(q), std::numeric_limits<Real>::min());

    if (std::abs(denom) > scale * Real(1e-14)) {
        const Real t = cross(w, q) / denom;
        const Real u = cross(w, r) / denom;
        if (t >= 0 && t <= 1 && u >= 0 && u <= 1) {
            SegmentHit<Real> hit{t, u, s1.at(t)};
            return hit;
        }
    }

    // No transversal crossing: look for near contact among the four
    // endpoint-to-segment distances.
    Real best = std::numeric_limits<Real>::infinity();
    SegmentHit<Real> hit{};
    auto consider = [&](Real d, Real t, Real u, Point<Real> p) {
        if (d < best) { best = d; hit = {t, u, p}; }
    };
    Real par{};
    consider(distance_to_segment(s1.a, s2, &par), Real(0), par, s1.a);
    consider(distance_to_segment(s1.b, s2, &par), Real(1), par, s1.b);
    consider(distance_to_segment(s2.a, s1, &par), par, Real(0), s2.a);
    consider(distance_to_segment(s2.b, s1, &par), par, Real(1), s2.b);
    if (best > tol) return std::nullopt;
    hit.collinear = std::abs(denom) <= scale * Real(1e-14);
    hit.grazing = true;
    return hit;
}

// Piecewise-linear curve. Half lines and lines carry unit ray directions
// attached to the first and/or last vertex.
template <class Real>
struct Polyline {
    std::vector<Point<Real>> vertices;
    bool closed = false;
    std::optional<Point<Real>> start_ray;  // direction leaving vertices.front()
    std::optional<Point<Real>> end_ray;    // direction leaving vertices.back()

    std::size_t segment_count() const {
        if (vertices.size() < 2) return 0;
        return closed ? vertices.size() : vertices.size() - 1;
    }
    Segment<Real> segment(std::size_t i) const {
        return {vertices[i], vertices[(i + 1) % vertices.size()]};
    }
    Real length() const {
        Real total = 0;
        for (std::size_t i = 0; i < segment_count(); ++i) total += segment(i).length();
        return total;
    }
    bool empty() const { return vertices.empty(); }
    Point<Real> front() const { return vertices.front(); }
    Point<Real> back() const { return vertices.back(); }

    // Point at arc length s from the first vertex (clamped).
    Point<Real> point_at(Real s) const {
        for (std::size_t i = 0; i < segment_count(); ++i) {
            const auto seg = segment(i);
            const Real len = seg.length();
            if (s <= len) return len > 0 ? seg.at(s / len) : seg.a;
            s -= len;
        }
        return closed ? vertices.front() : vertices.back();
    }

    // Finite polyline with rays cut at the given length.
    Polyline truncated(Real ray_length) const {
        Polyline out;
        out.closed = closed;
        if (start_ray) out.vertices.push_back(vertices.front() + ray_length * *start_ray);
        out.vertices.insert(out.vertices.end(), vertices.begin(), vertices.end());
        if (end_ray) out.vertices.push_back(vertices.back() + ray_length * *end_ray);
        return out;
    }

    Polyline translated(Point<Real> d) const {
        Polyline out = *this;
        for (auto& v : out.vertices) v += d;
        return out;
    }

    // Appends a vertex, merging collinear continuations and dropping repeats.
    void append(Point<Real> p) {
        if (!vertices.empty() && vertices.back() == p) return;
        if (vertices.size() >= 2) {
            const Point<Real> u = vertices.back() - vertices[vertices.size() - 2];
            const Point<Real> v = p - vertices.back();
            if (std::abs(cross(u, v)) <= Real(1e-15) * norm(u) * norm(v) && dot(u, v) > 0) {
                vertices.back() = p;
                return;
            }
        }
        vertices.push_back(p);
    }
};

template <class Real>
Polyline<Real> make_segment(Point<Real> a, Point<Real> b) {
    return Polyline<Real>{{a, b}};
}

template <class Real>
Polyline<Real> make_ray(Point<Real> origin, Point<Real> direction) {
    Polyline<Real> out{{origin}};
    out.end_ray = direction / norm(direction);
    return out;
}

template <class Real>
Polyline<Real> make_line(Point<Real> through, Point<Real> direction) {
    const Point<Real> d = direction / norm(direction);
    Polyline<Real> out{{through}};
    out.start_ray = -d;
    out.end_ray = d;
    return out;
}

template <class Real>
Polyline<Real> make_rectangle(Rect<Real> r) {
    Polyline<Real> out{{{r.x_min, r.y_min}, {r.x_max, r.y_min}, {r.x_max, r.y_max}, {r.x_min, r.y_max}}};
    out.closed = true;
    return out;
}

template <class Real>
Polyline<Real> make_circle(Point<Real> c, Real radius, int n) {
    Polyline<Real> out;
    out.closed = true;
    for (int i = 0; i < n; ++i) {
        const Real a = Real(2) * std::numbers::pi_v<Real> * Real(i) / Real(n);
        out.vertices.push_back({c.x + radius * std::cos(a), c.y + radius * std::sin(a)});
    }
    return out;
}

template <class Real>
Real distance_to_polyline(Point<Real> p, const Polyline<Real>& L) {
    if (L.vertices.size() == 1) return distance(p, L.vertices.front());
    Real best = std::numeric_limits<Real>::infinity();
    for (std::size_t i = 0; i < L.segment_count(); ++i) best = std::min(best, distance_to_segment(p, L.segment(i)));
    return best;
}

// Even-odd rule on a closed polyline (vertices taken cyclically).
template <class Real>
bool point_in_polygon(Point<Real> p, const std::vector<Point<Real>>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const Real xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

struct PolylineDiagnostics {
    bool distinct_vertices = true;
    bool simple = true;
    bool axis_aligned = true;
};

template <class Real>
PolylineDiagnostics diagnose(const Polyline<Real>& L, Real tol) {
    PolylineDiagnostics d;
    const std::size_t m = L.segment_count();
    for (std::size_t i = 0; i < m; ++i) {
        const auto s = L.segment(i);
        if (s.a == s.b) d.distinct_vertices = false;
        if (s.a.x != s.b.x && s.a.y != s.b.y) d.axis_aligned = false;
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const bool adjacent = j == i + 1 || (L.closed && i == 0 && j == m - 1);
            auto hit = intersect(L.segment(i), L.segment(j), tol);
            if (!hit) continue;
            if (adjacent) {
                // Neighbours share a vertex; only a fold-back is a defect.
                const auto si = L.segment(i);
                const auto sj = L.segment(j);
                if (hit->collinear && dot(si.b - si.a, sj.b - sj.a) < 0) d.simple = false;
                continue;
            }
            d.simple = false;
        }
    }
    return d;
}

} // namespace flatfix
