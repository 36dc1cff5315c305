#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

#include "flatfix/dynamics/displacement.hpp"
#include "flatfix/dynamics/fixed_points.hpp"
#include "flatfix/dynamics/index.hpp"

namespace flatfix::dynamics {

template <class Real>
struct SweepEntry {
    Real epsilon{};
    std::vector<FixedPointRecord<Real>> records;
    std::optional<DisplacementCertificate<Real>> certificate;  // present when records is empty
    bool boundary_fixed_line = false;                          // epsilon == 0: y = 0 is fixed pointwise
};

template <class Real>
struct SweepResult {
    std::vector<Real> epsilon_grid;
    std::vector<SweepEntry<Real>> entries;  // parallel to epsilon_grid

    std::vector<FixedPointRecord<Real>> records() const {
        std::vector<FixedPointRecord<Real>> all;
        for (const auto& e : entries) all.insert(all.end(), e.records.begin(), e.records.end());
        return all;
    }
    std::vector<DisplacementCertificate<Real>> empty_certificates() const {
        std::vector<DisplacementCertificate<Real>> all;
        for (const auto& e : entries)
            if (e.certificate) all.push_back(*e.certificate);
        return all;
    }
};

template <class Real>
struct SweepOptions {
    Rect<Real> window{0, 1, Real(1e-4), 1};
    Real grid_step = Real(1) / 600;
    Real tol = Real(1e-10);
    DetectorOptions<Real> detector{};
    unsigned workers = 0;  // 0: hardware concurrency
    bool compute_index = true;
};

// Index of an isolated record on the square of half-width r around it, left
// unset when the displacement vanishes on that square.
template <class Real>
void attach_index(const LiftMap<Real>& f_eps, FixedPointRecord<Real>& rec, Real r) {
    if (rec.degenerate) return;
    const Point<Real> c = rec.location;
    const Polyline<Real> loop = make_rectangle(Rect<Real>{c.x - r, c.x + r, c.y - r, c.y + r});
    try {
        rec.index = fixed_point_index(f_eps, loop);
    } catch (const Error&) {
        rec.index.reset();
    }
}

template <class Real>
SweepEntry<Real> sweep_one(const LiftMap<Real>& f, Real eps, const SweepOptions<Real>& opt) {
    const LiftMap<Real> fe = translate_eps(f, eps);
    SweepEntry<Real> e;
    e.epsilon = eps;
    e.boundary_fixed_line = eps == 0;
    e.records = find_fixed_points(fe, opt.window, opt.grid_step, opt.tol, opt.detector);
    if (opt.compute_index)
        for (auto& r : e.records) attach_index(fe, r, std::min(opt.grid_step, r.location.y - opt.window.y_min) / 2);
    if (e.records.empty()) e.certificate = min_displacement(fe, opt.window, opt.grid_step);
    return e;
}

// Independent epsilon values are processed concurrently; the result is
// ordered by epsilon regardless of completion order.
template <class Real>
SweepResult<Real> run_sweep(const LiftMap<Real>& f, std::vector<Real> eps_grid, const SweepOptions<Real>& opt = {}) {
    std::sort(eps_grid.begin(), eps_grid.end());
    SweepResult<Real> out;
    out.epsilon_grid = eps_grid;
    out.entries.resize(eps_grid.size());
    unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, eps_grid.size())));
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < eps_grid.size(); i += workers) out.entries[i] = sweep_one(f, eps_grid[i], opt);
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

} // namespace flatfix::dynamics
