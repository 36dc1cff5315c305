#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "flatfix/core/point.hpp"
#include "flatfix/core/polyline.hpp"
#include "flatfix/dynamics/lift_map.hpp"
#include "flatfix/dynamics/linalg2.hpp"

namespace flatfix::dynamics {

template <class Real>
struct FixedPointRecord {
    Real epsilon{};
    Point<Real> location{};
    Real residual{};          // |f_eps(location) - location|
    std::optional<int> index;
    // Rank-deficient displacement Jacobian: the fixed set through `location`
    // is a curve, traced into `extent` (vertices in order along the curve).
    bool degenerate = false;
    std::vector<Point<Real>> extent;

    // Distance from q to the fixed set represented by this record.
    Real distance_to(Point<Real> q) const {
        Real d = distance(q, location);
        if (extent.size() >= 2) d = std::min(d, distance_to_polyline(q, Polyline<Real>{extent}));
        return d;
    }
};

template <class Real>
struct DetectorOptions {
    // A root is accepted when |D| <= tol and |D| <= relative_tol * S, where
    // S = |eps| + |unshifted displacement| is the natural size of D there.
    Real relative_tol = Real(1e-8);
    int newton_iterations = 60;
    Real rank_ratio = Real(1e-6);  // sigma_min / sigma_max below this is rank-deficient
    bool trace_degenerate = true;
    std::size_t max_trace_points = 20000;
};

namespace detail {

template <class Real>
Mat2<Real> displacement_jacobian(const LiftMap<Real>& f, Point<Real> z, Real h) {
    const Point<Real> dx = (f.displacement({z.x + h, z.y}) - f.displacement({z.x - h, z.y})) / (2 * h);
    const Point<Real> dy = (f.displacement({z.x, z.y + h}) - f.displacement({z.x, z.y - h})) / (2 * h);
    return {dx.x, dy.x, dx.y, dy.y};
}

template <class Real>
struct NewtonResult {
    Point<Real> z;
    Point<Real> D;
    bool accepted = false;
};

template <class Real>
class Detector {
public:
    Detector(const LiftMap<Real>& f, Rect<Real> window, Real grid_step, Real tol, const DetectorOptions<Real>& opts)
        : f_(f), window_(window), h_(grid_step), tol_(tol), opts_(opts),
          jac_step_(grid_step * Real(1e-3)) {}

    Point<Real> D(Point<Real> z) const { return f_.displacement(z); }

    bool inside(Point<Real> z) const {
        // The Jacobian stencil must stay in the strip.
        return window_.contains(z) && z.y - jac_step_ >= 0 && z.y + jac_step_ <= 1;
    }

    bool acceptable(Point<Real> z, Point<Real> d) const {
        const Real r = norm(d);
        return r <= tol_ && r <= opts_.relative_tol * f_.displacement_scale(z);
    }

    Mat2<Real> jacobian(Point<Real> z) const { return displacement_jacobian(f_, z, jac_step_); }

    // Newton with minimum-norm steps and backtracking on |D|.
    NewtonResult<Real> newton(Point<Real> z, int iterations) const {
        Point<Real> d = D(z);
        int slow = 0;
        for (int it = 0; it < iterations && slow < 4; ++it) {
            if (d.x == 0 && d.y == 0) break;
            const Point<Real> step = pinv_solve(jacobian(z), d);
            if (!is_finite(step) || (step.x == 0 && step.y == 0)) break;
            Real lambda = 1;
            bool improved = false;
            Point<Real> z_new{}, d_new{};
            for (int ls = 0; ls < 12; ++ls, lambda /= 2) {
                z_new = z - lambda * step;
                if (!inside(z_new)) continue;
                d_new = D(z_new);
                if (norm(d_new) < norm(d)) { improved = true; break; }
            }
            if (!improved) break;
            slow = norm(d_new) > Real(0.7) * norm(d) ? slow + 1 : 0;
            const bool tiny = norm(z_new - z) <= Real(8) * std::numeric_limits<Real>::epsilon() * (1 + norm(z));
            z = z_new;
            d = d_new;
            if (tiny) break;
        }
        return {z, d, inside(z) && acceptable(z, d)};
    }

    // Follows the fixed curve through z0 along +-v0 until it ends or leaves
    // the window.
    std::vector<Point<Real>> trace(Point<Real> z0, Point<Real> v0) const {
        std::vector<Point<Real>> pts;
        Point<Real> z = z0, v = v0;
        const Real s_max = h_ / 2, s_min = h_ / 64;
        Real s = s_max;
        while (pts.size() < opts_.max_trace_points) {
            const Point<Real> guess = z + s * v;
            bool ok = false;
            NewtonResult<Real> corr;
            if (inside(guess)) {
                corr = newton(guess, 12);
                ok = corr.accepted && dot(corr.z - z, v) > s / 4;
            }
            if (!ok) {
                if (inside(guess) || s <= s_min) {
                    s /= 2;
                    if (s < s_min) break;
                    continue;
                }
                break;
            }
            const Svd2<Real> sv = svd2(jacobian(corr.z));
            pts.push_back(corr.z);
            if (!(sv.ratio() < opts_.rank_ratio)) break;
            Point<Real> nv = sv.v_min;
            if (dot(nv, v) < 0) nv = -nv;
            z = corr.z;
            v = nv;
            s = std::min(2 * s, s_max);
            if (pts.size() > 3 && distance(z, z0) < s) break;  // closed curve
        }
        return pts;
    }

    std::vector<FixedPointRecord<Real>> run() const {
        const std::size_t nx = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(window_.width() / h_)));
        const std::size_t ny = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(window_.height() / h_)));
        auto node = [&](std::size_t i, std::size_t j) {
            return Point<Real>{std::min(window_.x_min + Real(i) * h_, window_.x_max),
                               std::min(window_.y_min + Real(j) * h_, window_.y_max)};
        };
        std::vector<Point<Real>> grid((nx + 1) * (ny + 1));
        for (std::size_t j = 0; j <= ny; ++j)
            for (std::size_t i = 0; i <= nx; ++i) grid[j * (nx + 1) + i] = D(node(i, j));

        std::vector<FixedPointRecord<Real>> records;
        auto consider = [&](Point<Real> seed) {
            for (const auto& rec : records)
                if (rec.distance_to(seed) < h_) return;
            const NewtonResult<Real> nr = newton(seed, opts_.newton_iterations);
            if (!nr.accepted) return;
            const Real res = norm(nr.D);
            for (auto& rec : records) {
                if (rec.distance_to(nr.z) < 2 * h_) {
                    if (res < rec.residual) {
                        rec.location = nr.z;
                        rec.residual = res;
                    }
                    return;
                }
            }
            FixedPointRecord<Real> rec{f_.epsilon, nr.z, res};
            const Svd2<Real> sv = svd2(jacobian(nr.z));
            rec.degenerate = sv.ratio() < opts_.rank_ratio;
            if (rec.degenerate && opts_.trace_degenerate && sv.sigma_max > 0) {
                auto back = trace(nr.z, -sv.v_min);
                auto fwd = trace(nr.z, sv.v_min);
                rec.extent.assign(back.rbegin(), back.rend());
                rec.extent.push_back(nr.z);
                rec.extent.insert(rec.extent.end(), fwd.begin(), fwd.end());
            }
            records.push_back(std::move(rec));
        };

        for (std::size_t j = 0; j <= ny; ++j) {
            for (std::size_t i = 0; i <= nx; ++i) {
                const Point<Real> z = node(i, j);
                const Point<Real> d = grid[j * (nx + 1) + i];
                if (norm(d) < 10 * tol_ && acceptable(z, d)) consider(z);
            }
        }
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                const Point<Real> c[4] = {grid[j * (nx + 1) + i], grid[j * (nx + 1) + i + 1],
                                          grid[(j + 1) * (nx + 1) + i], grid[(j + 1) * (nx + 1) + i + 1]};
                Real lo_x = c[0].x, hi_x = c[0].x, lo_y = c[0].y, hi_y = c[0].y;
                for (int q = 1; q < 4; ++q) {
                    lo_x = std::min(lo_x, c[q].x); hi_x = std::max(hi_x, c[q].x);
                    lo_y = std::min(lo_y, c[q].y); hi_y = std::max(hi_y, c[q].y);
                }
                if (!(lo_x <= 0 && hi_x >= 0 && lo_y <= 0 && hi_y >= 0)) continue;
                // Corners may sit where D has underflowed to a constant, so
                // every corner and the centre is tried.
                consider(Point<Real>{(node(i, j).x + node(i + 1, j).x) / 2, (node(i, j).y + node(i, j + 1).y) / 2});
                for (int q = 0; q < 4; ++q) consider(node(i + (q & 1), j + (q >> 1)));
            }
        }
        std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
            return a.location.y != b.location.y ? a.location.y < b.location.y : a.location.x < b.location.x;
        });
        return records;
    }

private:
    const LiftMap<Real>& f_;
    Rect<Real> window_;
    Real h_;
    Real tol_;
    DetectorOptions<Real> opts_;
    Real jac_step_;
};

} // namespace detail

// Grid-seeded Newton search for zeros of D(z) = f_eps(z) - z in the window.
template <class Real>
std::vector<FixedPointRecord<Real>> find_fixed_points(const LiftMap<Real>& f_eps, Rect<Real> window, Real grid_step,
                                                      Real tol, const DetectorOptions<Real>& opts = {}) {
    return detail::Detector<Real>(f_eps, window, grid_step, tol, opts).run();
}

} // namespace flatfix::dynamics
