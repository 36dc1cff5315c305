#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "flatfix/dynamics/lift_map.hpp"

namespace flatfix::dynamics {

// Grid evidence that D = f_eps - id stays away from zero on a region. The
// modulus is the largest sampled |D(a) - D(b)| / |a - b| over neighbouring
// nodes. A cell whose smallest corner |D| exceeds modulus * (half diagonal) is
// certified; other cells are bisected up to max_depth times. certified_margin
// is the least such excess over the accepted cells and is positive when every
// cell was accepted. Evidence, not a proof: the modulus is sampled.
template <class Real>
struct DisplacementCertificate {
    Real epsilon{};
    Real min_displacement{};
    Point<Real> argmin{};
    Real grid_step{};
    Real modulus_bound{};
    Real certified_margin{};
    std::size_t refined_cells{};
    Real finest_step{};

    bool certified() const { return certified_margin > 0; }
};

namespace detail {

template <class Real>
struct CertifyState {
    const LiftMap<Real>* f;
    DisplacementCertificate<Real>* cert;
    int max_depth;
    bool modulus_grew = false;

    void see(Point<Real> z, Point<Real> d) {
        const Real m = norm(d);
        if (m < cert->min_displacement) {
            cert->min_displacement = m;
            cert->argmin = z;
        }
    }

    void bump(Point<Real> da, Point<Real> db, Real dist) {
        const Real q = norm(da - db) / dist;
        if (q > cert->modulus_bound) {
            cert->modulus_bound = q;
            modulus_grew = true;
        }
    }

    // Margin of the cell [x0, x0 + hx] x [y0, y0 + hy] given its corner
    // displacements (00, 10, 01, 11), bisecting while it is not positive.
    Real cell(Real x0, Real y0, Real hx, Real hy, const Point<Real> (&c)[4], int depth) {
        const Real corner_min = std::min({norm(c[0]), norm(c[1]), norm(c[2]), norm(c[3])});
        const Real margin = corner_min - cert->modulus_bound * std::hypot(hx, hy) / 2;
        if (margin > 0 || depth >= max_depth) {
            cert->finest_step = std::min(cert->finest_step, std::max(hx, hy));
            return margin;
        }
        ++cert->refined_cells;
        const Real ux = hx / 2, uy = hy / 2;
        Point<Real> g[3][3];
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) {
                if (i % 2 == 0 && j % 2 == 0) {
                    g[j][i] = c[(j / 2) * 2 + i / 2];
                    continue;
                }
                const Point<Real> z{x0 + Real(i) * ux, y0 + Real(j) * uy};
                g[j][i] = f->displacement(z);
                see(z, g[j][i]);
            }
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) {
                if (i > 0) bump(g[j][i], g[j][i - 1], ux);
                if (j > 0) bump(g[j][i], g[j - 1][i], uy);
            }
        Real worst = std::numeric_limits<Real>::infinity();
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i) {
                const Point<Real> sub[4] = {g[j][i], g[j][i + 1], g[j + 1][i], g[j + 1][i + 1]};
                worst = std::min(worst, cell(x0 + Real(i) * ux, y0 + Real(j) * uy, ux, uy, sub, depth + 1));
            }
        return worst;
    }
};

} // namespace detail

template <class Real>
DisplacementCertificate<Real> min_displacement(const LiftMap<Real>& f_eps, Rect<Real> region, Real grid_step,
                                               int max_depth = 6) {
    const std::size_t nx = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(region.width() / grid_step)));
    const std::size_t ny = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(region.height() / grid_step)));
    const Real hx = region.width() / Real(nx), hy = region.height() / Real(ny);

    DisplacementCertificate<Real> cert;
    cert.epsilon = f_eps.epsilon;
    cert.grid_step = std::max(hx, hy);
    cert.min_displacement = std::numeric_limits<Real>::infinity();
    detail::CertifyState<Real> st{&f_eps, &cert, max_depth};

    std::vector<Point<Real>> nodes((nx + 1) * (ny + 1));
    auto at = [&](std::size_t i, std::size_t j) -> Point<Real>& { return nodes[j * (nx + 1) + i]; };
    for (std::size_t j = 0; j <= ny; ++j)
        for (std::size_t i = 0; i <= nx; ++i) {
            const Point<Real> z{region.x_min + Real(i) * hx, region.y_min + Real(j) * hy};
            at(i, j) = f_eps.displacement(z);
            st.see(z, at(i, j));
            if (i > 0) st.bump(at(i, j), at(i - 1, j), hx);
            if (j > 0) st.bump(at(i, j), at(i, j - 1), hy);
        }

    // Refinement can raise the sampled modulus, which invalidates cells
    // accepted earlier; repeat the pass until the modulus is stable.
    for (int pass = 0; pass < 4; ++pass) {
        st.modulus_grew = false;
        cert.refined_cells = 0;
        cert.finest_step = cert.grid_step;
        Real margin = std::numeric_limits<Real>::infinity();
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                const Point<Real> c[4] = {at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)};
                margin = std::min(margin, st.cell(region.x_min + Real(i) * hx, region.y_min + Real(j) * hy, hx, hy, c, 0));
            }
        cert.certified_margin = margin;
        if (!st.modulus_grew) break;
        cert.certified_margin = -std::numeric_limits<Real>::infinity();
    }
    return cert;
}

} // namespace flatfix::dynamics
