#pragma once

#include <cstdlib>
#include <optional>
#include <vector>

#include "flatfix/brouwer/half_line.hpp"

namespace flatfix::brouwer {

template <class Real>
struct Periodicity {
    int N{};
    Polyline<Real> W0;
    std::size_t first_event{};
    std::size_t second_event{};
    bool single_point_overlap = false;  // W0 ∩ (W0 + (N,0)) is one point
};

// Looks for two deviation events with the same (arc, side) label on verticals
// i and i + N, |N| in [n_min, n_max], and returns the least |N| found.
template <class Real>
std::optional<Periodicity<Real>> detect_eventual_periodicity(const Polyline<Real>& L,
                                                             const std::vector<DeviationEvent<Real>>& events,
                                                             int n_min = 1, int n_max = 16, Real tol = Real(1e-9)) {
    std::optional<Periodicity<Real>> best;
    for (std::size_t a = 0; a < events.size(); ++a) {
        for (std::size_t b = a + 1; b < events.size(); ++b) {
            const auto& ea = events[a];
            const auto& eb = events[b];
            if (ea.arc < 0 || ea.arc != eb.arc || ea.side != eb.side) continue;
            const int N = eb.vertical - ea.vertical;
            if (std::abs(N) < n_min || std::abs(N) > n_max) continue;
            if (best && std::abs(best->N) <= std::abs(N)) continue;
            Periodicity<Real> p;
            p.N = N;
            p.first_event = a;
            p.second_event = b;
            p.W0 = detail::subarc(L, ea.position, eb.position);
            const auto shifted = p.W0.translated({Real(N), 0});
            std::size_t contacts = 0;
            for (const auto& hit : intersections(p.W0, shifted, tol))
                if (distance(hit.hit.point, p.W0.back()) > tol) ++contacts;
            p.single_point_overlap = contacts == 0 && distance(p.W0.back(), shifted.front()) <= tol;
            best = p;
            break;
        }
    }
    return best;
}

template <class Real>
std::optional<Periodicity<Real>> detect_eventual_periodicity(const HalfLine<Real>& L, int n_min = 1, int n_max = 16) {
    return detect_eventual_periodicity(L.path, L.events, n_min, n_max);
}

} // namespace flatfix::brouwer
