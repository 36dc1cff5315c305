#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "flatfix/core/errors.hpp"
#include "flatfix/core/polyline.hpp"

namespace flatfix::brouwer {

// Image of a finite polyline under a map, refined until consecutive image
// points are closer than `resolution`. params[i] is the arc length of the
// source point along the input.
template <class Real>
struct SampledImage {
    std::vector<Real> params;
    std::vector<Point<Real>> source;
    Polyline<Real> image;
    Real resolution{};
    bool resolved = true;  // false when the depth limit stopped refinement

    // Source parameter of a point at fraction u of image segment i.
    Real param_at(std::size_t i, Real u) const { return params[i] + u * (params[i + 1] - params[i]); }
};

template <class Real>
SampledImage<Real> sample_image(const std::function<Point<Real>(Point<Real>)>& m, const Polyline<Real>& src,
                                Real resolution, int max_depth = 24, std::size_t max_points = std::size_t(1) << 22) {
    SampledImage<Real> out;
    out.resolution = resolution;
    if (src.vertices.empty()) return out;
    auto eval = [&](Point<Real> p) {
        const Point<Real> q = m(p);
        if (!is_finite(q)) throw SamplingInconclusive("sample_image: map returned a non-finite point");
        return q;
    };
    Real offset = 0;
    Point<Real> first = eval(src.vertices.front());
    out.params.push_back(0);
    out.source.push_back(src.vertices.front());
    out.image.vertices.push_back(first);

    std::function<void(Point<Real>, Point<Real>, Point<Real>, Point<Real>, Real, Real, int)> refine =
        [&](Point<Real> a, Point<Real> b, Point<Real> ma, Point<Real> mb, Real sa, Real sb, int depth) {
            if (distance(ma, mb) > resolution) {
                if (depth < max_depth) {
                    const Point<Real> c = (a + b) / Real(2);
                    const Point<Real> mc = eval(c);
                    const Real sc = (sa + sb) / 2;
                    refine(a, c, ma, mc, sa, sc, depth + 1);
                    refine(c, b, mc, mb, sc, sb, depth + 1);
                    return;
                }
                out.resolved = false;
            }
            if (out.params.size() >= max_points)
                throw ResolutionLimit("sample_image: more than " + std::to_string(max_points) + " image points");
            out.params.push_back(sb);
            out.source.push_back(b);
            out.image.vertices.push_back(mb);
        };
    Point<Real> prev_img = first;
    for (std::size_t i = 0; i < src.segment_count(); ++i) {
        const auto seg = src.segment(i);
        const Real len = seg.length();
        // Seed with a few subdivisions so that short excursions are not missed.
        const int pieces = std::max(1, static_cast<int>(std::ceil(len / (64 * resolution))));
        Point<Real> a = seg.a;
        Real sa = offset;
        for (int k = 1; k <= pieces; ++k) {
            const Point<Real> b = seg.at(Real(k) / Real(pieces));
            const Real sb = offset + len * Real(k) / Real(pieces);
            const Point<Real> mb = eval(b);
            refine(a, b, prev_img, mb, sa, sb, 0);
            a = b;
            sa = sb;
            prev_img = mb;
        }
        offset += len;
    }
    return out;
}

// Uniform-grid bucket index over the segments of a polyline.
template <class Real>
class SegmentIndex {
public:
    SegmentIndex(const Polyline<Real>& L, Real cell) : count_(L.segment_count()), cell_(cell) {
        for (std::size_t i = 0; i < count_; ++i) {
            const auto s = L.segment(i);
            const bool fits = visit(std::min(s.a.x, s.b.x), std::max(s.a.x, s.b.x), std::min(s.a.y, s.b.y),
                                    std::max(s.a.y, s.b.y), [&](long long key) { buckets_[key].push_back(i); });
            if (!fits) oversized_.push_back(i);
        }
    }

    // Calls fn(segment index) once for each segment whose cells meet the padded box of s.
    template <class Fn>
    void query(Segment<Real> s, Real pad, Fn fn) const {
        std::vector<std::size_t> hits(oversized_);
        const bool fits = visit(std::min(s.a.x, s.b.x) - pad, std::max(s.a.x, s.b.x) + pad,
                                std::min(s.a.y, s.b.y) - pad, std::max(s.a.y, s.b.y) + pad, [&](long long key) {
                                    auto it = buckets_.find(key);
                                    if (it != buckets_.end()) hits.insert(hits.end(), it->second.begin(), it->second.end());
                                });
        if (!fits) {
            for (std::size_t i = 0; i < count_; ++i) fn(i);
            return;
        }
        std::sort(hits.begin(), hits.end());
        hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
        for (std::size_t i : hits) fn(i);
    }

private:
    static constexpr long long kMaxCells = 4096;

    // Visits the cells covering the box; returns false (visiting nothing) when there are too many.
    template <class Fn>
    bool visit(Real x0, Real x1, Real y0, Real y1, Fn fn) const {
        const long long i0 = cell_index(x0), i1 = cell_index(x1), j0 = cell_index(y0), j1 = cell_index(y1);
        if ((i1 - i0 + 1) * (j1 - j0 + 1) > kMaxCells) return false;
        for (long long i = i0; i <= i1; ++i)
            for (long long j = j0; j <= j1; ++j) fn(i * 4000037LL + j);
        return true;
    }
    long long cell_index(Real v) const {
        const Real c = std::floor(v / cell_);
        return static_cast<long long>(std::clamp(c, Real(-1e6), Real(1e6)));
    }

    std::size_t count_;
    Real cell_;
    std::unordered_map<long long, std::vector<std::size_t>> buckets_;
    std::vector<std::size_t> oversized_;
};

template <class Real>
struct PolylineHit {
    std::size_t i{};  // segment of the first polyline
    std::size_t j{};  // segment of the second polyline
    SegmentHit<Real> hit;
};

// All crossings and near contacts (within tol) between two finite polylines.
template <class Real>
std::vector<PolylineHit<Real>> intersections(const Polyline<Real>& P, const Polyline<Real>& Q, Real tol) {
    std::vector<PolylineHit<Real>> out;
    if (P.segment_count() == 0 || Q.segment_count() == 0) return out;
    if (std::min(P.segment_count(), Q.segment_count()) <= 8) {
        for (std::size_t i = 0; i < P.segment_count(); ++i) {
            const auto s = P.segment(i);
            const Real x0 = std::min(s.a.x, s.b.x) - tol, x1 = std::max(s.a.x, s.b.x) + tol;
            const Real y0 = std::min(s.a.y, s.b.y) - tol, y1 = std::max(s.a.y, s.b.y) + tol;
            for (std::size_t j = 0; j < Q.segment_count(); ++j) {
                const auto q = Q.segment(j);
                if (std::max(q.a.x, q.b.x) < x0 || std::min(q.a.x, q.b.x) > x1 || std::max(q.a.y, q.b.y) < y0 ||
                    std::min(q.a.y, q.b.y) > y1)
                    continue;
                if (auto h = intersect(s, q, tol)) out.push_back({i, j, *h});
            }
        }
        return out;
    }
    Real total = 0;
    for (std::size_t j = 0; j < Q.segment_count(); ++j) total += Q.segment(j).length();
    const Real cell = std::max(total / Real(Q.segment_count()) * 4, Real(1e-9));
    const SegmentIndex<Real> index(Q, cell);
    for (std::size_t i = 0; i < P.segment_count(); ++i) {
        const auto s = P.segment(i);
        index.query(s, tol, [&](std::size_t j) {
            if (auto h = intersect(s, Q.segment(j), tol)) out.push_back({i, j, *h});
        });
    }
    return out;
}

} // namespace flatfix::brouwer
