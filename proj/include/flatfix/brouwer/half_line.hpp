#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatfix/brouwer/crossings.hpp"
#include "flatfix/brouwer/moduli.hpp"
#include "flatfix/brouwer/plane_map.hpp"
#include "flatfix/brouwer/predicates.hpp"
#include "flatfix/brouwer/sampling.hpp"
#include "flatfix/core/errors.hpp"
#include "flatfix/core/polyline.hpp"

namespace flatfix::brouwer {

enum class FailureKind { none, no_base_point, tangency_ambiguous, step_limit };
enum class Termination { none, case_iii_ray, unbounded_base_point, twist_region, deviation_ray, periodic };
enum class Side { left, right };

inline const char* to_string(FailureKind f) {
    switch (f) {
        case FailureKind::no_base_point: return "NoBasePointFound";
        case FailureKind::tangency_ambiguous: return "TangencyAmbiguous";
        case FailureKind::step_limit: return "StepLimit";
        default: return "none";
    }
}

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::case_iii_ray: return "case-iii-ray";
        case Termination::unbounded_base_point: return "unbounded-base-point";
        case Termination::twist_region: return "twist-region";
        case Termination::deviation_ray: return "deviation-ray";
        case Termination::periodic: return "periodic";
        default: return "none";
    }
}

inline const char* to_string(Side s) { return s == Side::left ? "l" : "r"; }

template <class Real>
struct DeviationEvent {
    int vertical{};        // j of V_j
    int arc{};             // label m of gamma_m
    Side side{};           // the base point u_{m,side} taken
    int deviation_case{};  // 1, 2 or 3
    Point<Real> z{};
    Point<Real> base{};
    Real position{};       // arc length of the base point along the path
};

template <class Real>
struct StepRecord {
    Point<Real> base{};
    Point<Real> direction{};  // ray direction from the base point (free side)
    bool bounded = false;
    AbutCase kind = AbutCase::none;
    Polyline<Real> translation_arc;  // PP' on the ray when bounded
    Real eta{};
};

template <class Real>
struct HalfLineParams {
    AbutParams<Real> abut;  // abut.t_max is the horizon for unbounded rays
    Real moduli_grid = Real(1) / 32;
    std::optional<Real> y0;  // twist level; above it a free vertical ray ends the construction
    int max_steps = 64;
    bool deviation = true;
    Real crossing_y_min = -8;
    Real crossing_y_max = 8;
    Real crossing_step = Real(1) / 256;
    int image_iterates = 2;   // |n| checked in the union of iterates for deviation case (iii)
    int periodic_copies = 3;  // translated copies appended once a period is detected
};

template <class Real>
struct HalfLine {
    Polyline<Real> path;
    bool success = false;
    FailureKind failure = FailureKind::none;
    std::string message;
    int failing_step = -1;
    Termination termination = Termination::none;
    std::vector<StepRecord<Real>> steps;
    std::vector<DeviationEvent<Real>> events;
    std::optional<int> period;
};

namespace detail {

// Sub-arc of a finite polyline between arc lengths s0 <= s1.
template <class Real>
Polyline<Real> subarc(const Polyline<Real>& L, Real s0, Real s1) {
    Polyline<Real> out;
    out.vertices.push_back(L.point_at(s0));
    Real acc = 0;
    for (std::size_t i = 0; i < L.segment_count(); ++i) {
        acc += L.segment(i).length();
        if (acc > s0 && acc < s1) out.append(L.vertices[i + 1]);
    }
    out.append(L.point_at(s1));
    if (out.vertices.size() == 1) out.vertices.push_back(out.vertices.front());
    return out;
}

template <class Real>
Polyline<Real> reversed(Polyline<Real> L) {
    std::reverse(L.vertices.begin(), L.vertices.end());
    return L;
}

// A' = h^{-1}(b), B' = b, C' = h(b) with arcs AB' and BC' = h(AB') built
// from a straight translation arc [z, h(z)] containing b.
template <class Real>
struct BaseArcs {
    Polyline<Real> AB;
    Polyline<Real> BC;
};

template <class Real>
BaseArcs<Real> base_arcs_on(const PlaneMap<Real>& h, Point<Real> z, Point<Real> hz, Point<Real> b, Real res) {
    BaseArcs<Real> out;
    out.AB = sample_image<Real>(h.inverse, make_segment(b, hz), res).image;
    out.AB.append(b);
    out.BC = make_segment(b, hz);
    for (const auto& p : sample_image<Real>(h.forward, make_segment(z, b), res).image.vertices) out.BC.append(p);
    return out;
}

// Sign (+1 left of the arc's orientation, -1 right) of the free side of PP'
// on the arc gamma = b ... P, from the closed curve bounding U_1.
template <class Real>
int free_side_sign(const PlaneMap<Real>& h, const BaseArcs<Real>& base, const Polyline<Real>& gamma,
                   const AbutEvent<Real>& ev, Real res) {
    const Real t_total = gamma.length();
    const Polyline<Real> g_prime = subarc(gamma, Real(0), ev.s_prime);
    const Polyline<Real> g_full = subarc(gamma, Real(0), t_total);
    std::vector<Point<Real>> curve;
    auto add = [&](const Polyline<Real>& piece) {
        for (const auto& p : piece.vertices)
            if (curve.empty() || !(curve.back() == p)) curve.push_back(p);
    };
    const Polyline<Real> pp = subarc(gamma, ev.s_prime, t_total);  // P' -> P
    if (ev.kind == AbutCase::inverse_image) {
        add(sample_image<Real>(h.inverse, g_prime, res).image);  // A' -> P
        add(reversed(pp));                                         // P -> P'
        add(reversed(sample_image<Real>(h.forward, g_full, res).image));  // P' -> C'
        add(reversed(base.BC));                                    // C' -> B'
        add(reversed(base.AB));                                    // B' -> A'
    } else {
        add(sample_image<Real>(h.forward, g_prime, res).image);   // C' -> P
        add(reversed(pp));                                         // P -> P'
        add(reversed(sample_image<Real>(h.inverse, g_full, res).image));  // P' -> A'
        add(base.AB);                                              // A' -> B'
        add(base.BC);                                              // B' -> C'
    }
    // Probe just off the midpoint of PP'.
    const Real len = pp.length();
    const Real mid = len / 2;
    Real acc = 0;
    Point<Real> tangent{0, 1};
    for (std::size_t i = 0; i < pp.segment_count(); ++i) {
        const auto s = pp.segment(i);
        if (acc + s.length() >= mid) { tangent = (s.b - s.a) / s.length(); break; }
        acc += s.length();
    }
    const Point<Real> m = pp.point_at(mid);
    const Real delta = std::max(len * Real(1e-3), Real(1e-9));
    const bool in_left = point_in_polygon(m + delta * perp(tangent), curve);
    const bool in_right = point_in_polygon(m - delta * perp(tangent), curve);
    if (in_left == in_right) throw TangencyAmbiguous("free side: both probes on the same side of the closed curve");
    return in_left ? -1 : 1;
}

template <class Real>
bool meets_any(const Polyline<Real>& a, const std::vector<Polyline<Real>>& obstacles, Real tol) {
    for (const auto& o : obstacles)
        if (!intersections(a, o, tol).empty()) return true;
    return false;
}

} // namespace detail

// Best-effort construction of a half Brouwer line from B upward (or along `start_dir`).
template <class Real>
class HalfLineBuilder {
public:
    HalfLineBuilder(const PlaneMap<Real>& h, HalfLineParams<Real> prm) : h_(h), prm_(std::move(prm)) {}

    HalfLine<Real> run(const Polyline<Real>& AB, const Polyline<Real>& BC, Point<Real> B, Point<Real> start_dir = {0, 1});

private:
    struct State {
        Point<Real> base{};
        Point<Real> dir{};
        detail::BaseArcs<Real> arcs;
        std::vector<Polyline<Real>> arc_images;  // h(T) and h^{-1}(T) of the arc containing base
        Polyline<Real> arc;                      // T, the translation arc containing base
        std::optional<AbutEvent<Real>> event;
        bool via_twist = false;
    };

    const PlaneMap<Real>& h_;
    HalfLineParams<Real> prm_;
    std::map<int, Moduli<Real>> moduli_cache_;
    std::optional<VerticalCrossings<Real>> crossings_;
    std::map<std::pair<int, int>, std::optional<State>> u_cache_;

    Real res() const { return prm_.abut.resolution; }

    Real eta_for(const Polyline<Real>& T) {
        Real extent = 1;
        for (const auto& v : T.vertices) {
            extent = std::max(extent, std::abs(v.y));
            if (!h_.periodic) extent = std::max(extent, std::abs(v.x));
        }
        const int n = static_cast<int>(std::ceil(extent));
        auto it = moduli_cache_.find(n);
        if (it == moduli_cache_.end()) it = moduli_cache_.emplace(n, moduli(h_, n, prm_.moduli_grid)).first;
        return it->second.eta_n;
    }

    std::vector<Polyline<Real>> images_of(const Polyline<Real>& T) const {
        return {sample_image<Real>(h_.forward, T, res()).image, sample_image<Real>(h_.inverse, T, res()).image};
    }

    // Abutment test for the ray from b in direction dir; fills event / via_twist.
    void classify_ray(State& s, const std::vector<Polyline<Real>>& obstacles) const {
        AbutParams<Real> a = prm_.abut;
        const bool upward = s.dir.x == 0 && s.dir.y > 0;
        if (prm_.y0 && upward) a.t_max = std::max(*prm_.y0 - s.base.y, Real(0)) + a.step;
        s.event = first_abutment(h_, Polyline<Real>{}, s.base, s.dir, a);
        s.via_twist = prm_.y0 && upward && !s.event;
        const Real reach = s.event ? s.event->t_star : prm_.abut.t_max;
        const Point<Real> from = s.base + std::max(Real(1e-9), res() * Real(1e-3)) * s.dir;
        if (detail::meets_any(make_segment(from, s.base + reach * s.dir), obstacles, prm_.abut.tangency_tol))
            throw TangencyAmbiguous("base point ray meets h(T) or h^{-1}(T)");
    }

    // Scans the mid-segment of the straight translation arc [z, hz] for a base point.
    State find_base_point(Point<Real> z, Point<Real> hz, Point<Real> dir, std::string& why) {
        const Polyline<Real> T = make_segment(z, hz);
        const auto imgs = images_of(T);
        const Real eta = eta_for(T);
        const Real len = distance(z, hz);
        const Real lo = std::min(eta, len / 2), hi = len - lo;
        const Real step = eta / 4;
        std::vector<Real> cands{len / 2};
        for (int j = 1;; ++j) {
            const Real a = len / 2 - j * step, b = len / 2 + j * step;
            if (a < lo && b > hi) break;
            if (a >= lo) cands.push_back(a);
            if (b <= hi) cands.push_back(b);
        }
        bool ambiguous = false;
        for (Real c : cands) {
            const Point<Real> b = z + (c / len) * (hz - z);
            State s;
            s.base = b;
            s.dir = dir;
            s.arc = T;
            s.arc_images = imgs;
            try {
                classify_ray(s, imgs);
                s.arcs = detail::base_arcs_on(h_, z, hz, b, res());
                last_eta_ = eta;
                return s;
            } catch (const TangencyAmbiguous& e) {
                ambiguous = true;
                why = e.what();
            }
        }
        if (ambiguous) throw TangencyAmbiguous("no base point: every candidate was ambiguous (" + why + ")");
        throw NoBasePoint("no base point on the mid-segment");
    }

    struct NoBasePoint : Error { using Error::Error; };

    Real last_eta_{};

    const VerticalCrossings<Real>& crossings() {
        if (!crossings_)
            crossings_ = vertical_crossings(h_, 0, prm_.crossing_y_min, prm_.crossing_y_max, prm_.crossing_step);
        return *crossings_;
    }

    // u_{m,side} on V_0.
    std::optional<State> base_on_crossing(int m, Side side) {
        const auto key = std::make_pair(m, side == Side::left ? 0 : 1);
        auto it = u_cache_.find(key);
        if (it != u_cache_.end()) return it->second;
        const auto& arc = crossings().arcs.at(m);
        std::optional<State> out;
        try {
            std::string why;
            out = find_base_point(arc.w, arc.w_image, Point<Real>{side == Side::left ? Real(-1) : Real(1), 0}, why);
        } catch (const Error&) {
            out.reset();
        }
        u_cache_[key] = out;
        return out;
    }

    static State shifted(State s, Real dx) {
        const Point<Real> d{dx, 0};
        s.base += d;
        s.arcs.AB = s.arcs.AB.translated(d);
        s.arcs.BC = s.arcs.BC.translated(d);
        s.arc = s.arc.translated(d);
        for (auto& p : s.arc_images) p = p.translated(d);
        if (s.event) { s.event->P += d; s.event->P_prime += d; }
        return s;
    }

    // Deviation at z in V_j for the horizontal ray from cur. Returns the new
    // state (cases ii, iii), or nullopt with `ray` set for case i.
    std::optional<State> deviate(const State& cur, Point<Real> z, int j, HalfLine<Real>& out,
                                 std::optional<Point<Real>>& ray, int& which_case, int& label, Side& side);
};

template <class Real>
std::optional<typename HalfLineBuilder<Real>::State> HalfLineBuilder<Real>::deviate(
    const State& cur, Point<Real> z, int j, HalfLine<Real>& out, std::optional<Point<Real>>& ray, int& which_case,
    int& label, Side& side) {
    (void)out;
    const Real tol = prm_.abut.tangency_tol;
    const auto shifted_x = Real(j);
    const Polyline<Real> bz = make_segment(cur.base, z);
    std::vector<Polyline<Real>> T_all = cur.arc_images;
    T_all.push_back(cur.arc);
    const Side travel = cur.dir.x > 0 ? Side::right : Side::left;

    // (iii) z inside some gamma_m^j.
    for (const auto& a0 : crossings().arcs) {
        CrossingArc<Real> a = a0;
        a.w.x += shifted_x;
        a.w_image.x += shifted_x;
        if (!a.contains_interior(z, tol)) continue;
        const Polyline<Real> g = a.polyline();
        if (detail::meets_any(g, T_all, tol)) continue;
        bool clean = true;
        Polyline<Real> fwd = g, bwd = g;
        const Polyline<Real> bz_open = make_segment(cur.base, z - Real(1e-9) * cur.dir);
        for (int n = 1; n <= prm_.image_iterates && clean; ++n) {
            fwd = sample_image<Real>(h_.forward, fwd, res()).image;
            bwd = sample_image<Real>(h_.inverse, bwd, res()).image;
            if (!intersections(fwd, bz_open, tol).empty() || !intersections(bwd, bz_open, tol).empty()) clean = false;
        }
        if (!clean) continue;
        auto u = base_on_crossing(a0.label, travel);
        if (!u) continue;
        which_case = 3;
        label = a0.label;
        side = travel;
        return shifted(*u, shifted_x);
    }

    // (i) a free vertical half line through z.
    for (Point<Real> vdir : {Point<Real>{0, 1}, Point<Real>{0, -1}}) {
        try {
            if (first_abutment(h_, bz, z, vdir, prm_.abut)) continue;
            Polyline<Real> alpha = bz;
            alpha.append(z + prm_.abut.t_max * vdir);
            if (detail::meets_any(alpha, cur.arc_images, tol)) continue;
            which_case = 1;
            ray = vdir;
            return std::nullopt;
        } catch (const TangencyAmbiguous&) {
        }
    }

    // (ii) alpha = B_k z ∪ zc abuts on its image and contains some gamma_m^j.
    for (Point<Real> vdir : {Point<Real>{0, 1}, Point<Real>{0, -1}}) {
        try {
            auto ev = first_abutment(h_, bz, z, vdir, prm_.abut);
            if (!ev) continue;
            Polyline<Real> alpha = bz;
            alpha.append(ev->P);
            if (detail::meets_any(alpha, cur.arc_images, tol)) continue;
            const Real ylo = std::min(z.y, ev->P.y), yhi = std::max(z.y, ev->P.y);
            const int sign = detail::free_side_sign(h_, cur.arcs, alpha, *ev, res());
            // Free side of the vertical part, which is oriented along vdir.
            const Point<Real> free_dir = Real(sign) * perp(vdir);
            const Side s = free_dir.x > 0 ? Side::right : Side::left;
            for (const auto& a0 : crossings().arcs) {
                if (a0.y_lo() < ylo || a0.y_hi() > yhi) continue;
                auto u = base_on_crossing(a0.label, s);
                if (!u) continue;
                which_case = 2;
                label = a0.label;
                side = s;
                return shifted(*u, shifted_x);
            }
        } catch (const TangencyAmbiguous&) {
        }
    }
    throw NoBasePoint("deviation at V_" + std::to_string(j) + ": none of the three alternatives verified");
}

template <class Real>
HalfLine<Real> HalfLineBuilder<Real>::run(const Polyline<Real>& AB, const Polyline<Real>& BC, Point<Real> B,
                                          Point<Real> start_dir) {
    HalfLine<Real> out;
    out.path.vertices.push_back(B);
    auto fail = [&](FailureKind k, const std::string& msg, int step) {
        out.success = false;
        out.failure = k;
        out.message = msg;
        out.failing_step = step;
        return out;
    };
    if (!is_translation_arc(h_, AB, Real(1e-9)))
        throw ConfigError("construct_half_line: AB is not a translation arc");

    State cur;
    cur.base = B;
    cur.dir = start_dir / norm(start_dir);
    cur.arcs = {AB, BC};
    cur.arc = AB;
    try {
        AbutParams<Real> a = prm_.abut;
        const bool upward = cur.dir.x == 0 && cur.dir.y > 0;
        if (prm_.y0 && upward) a.t_max = std::max(*prm_.y0 - B.y, Real(0)) + a.step;
        const auto rep = abut_classify(h_, AB, BC, B, a, cur.dir);
        cur.event = rep.event;
        cur.via_twist = prm_.y0 && upward && !rep.event;
    } catch (const TangencyAmbiguous& e) {
        return fail(FailureKind::tangency_ambiguous, e.what(), 0);
    } catch (const HorizonReached& e) {
        return fail(FailureKind::no_base_point, e.what(), 0);
    }

    std::map<std::pair<int, int>, std::size_t> seen;  // (label, side) -> event index
    for (int step = 0; step <= prm_.max_steps; ++step) {
        StepRecord<Real> rec;
        rec.base = cur.base;
        rec.direction = cur.dir;
        rec.bounded = cur.event.has_value();
        rec.eta = last_eta_;
        if (cur.event) {
            rec.kind = cur.event->kind;
            rec.translation_arc = make_segment(cur.event->P_prime, cur.event->P);
        }
        out.steps.push_back(rec);

        if (!cur.event) {
            out.path.end_ray = cur.dir;
            out.success = true;
            out.termination = cur.via_twist ? Termination::twist_region
                              : step == 0    ? Termination::case_iii_ray
                                             : Termination::unbounded_base_point;
            return out;
        }
        if (step == prm_.max_steps) break;

        const auto& ev = *cur.event;
        const Point<Real> z = ev.kind == AbutCase::inverse_image ? ev.P : ev.P_prime;
        const Point<Real> hz = ev.kind == AbutCase::inverse_image ? ev.P_prime : ev.P;
        State next;
        try {
            const Polyline<Real> gamma = make_segment(cur.base, ev.P);
            const int sign = detail::free_side_sign(h_, cur.arcs, gamma, ev, res());
            const Point<Real> free_dir = Real(sign) * perp(cur.dir);
            std::string why;
            next = find_base_point(z, hz, free_dir, why);
        } catch (const TangencyAmbiguous& e) {
            return fail(FailureKind::tangency_ambiguous, e.what(), step + 1);
        } catch (const NoBasePoint& e) {
            return fail(FailureKind::no_base_point, e.what(), step + 1);
        }

        // Deviation when the horizontal move crosses an integer vertical.
        const bool horizontal = cur.dir.y == 0;
        if (prm_.deviation && h_.periodic && horizontal) {
            const Real x0 = cur.base.x, x1 = next.base.x;
            const Real lo = std::min(x0, x1), hi = std::max(x0, x1);
            const Real first = cur.dir.x > 0 ? std::floor(lo) + 1 : std::ceil(hi) - 1;
            if (first > lo && first < hi) {
                const int j = static_cast<int>(first);
                const Point<Real> zj{first, cur.base.y};
                std::optional<Point<Real>> ray;
                int which = 0, label = -1;
                Side side = Side::left;
                std::optional<State> dev;
                try {
                    dev = deviate(cur, zj, j, out, ray, which, label, side);
                } catch (const NoBasePoint& e) {
                    return fail(FailureKind::no_base_point, e.what(), step + 1);
                } catch (const TangencyAmbiguous& e) {
                    return fail(FailureKind::tangency_ambiguous, e.what(), step + 1);
                }
                out.path.append(zj);
                if (!dev) {
                    out.path.end_ray = *ray;
                    out.success = true;
                    out.termination = Termination::deviation_ray;
                    out.events.push_back({j, -1, Side::left, 1, zj, zj, out.path.length()});
                    return out;
                }
                out.path.append(dev->base);
                out.events.push_back({j, label, side, which, zj, dev->base, out.path.length()});
                const auto key = std::make_pair(label, side == Side::left ? 0 : 1);
                if (auto it = seen.find(key); it != seen.end() && out.events[it->second].vertical != j) {
                    // From here on the construction repeats the piece W0 between
                    // the two events, translated by (N, 0).
                    const std::size_t e0 = it->second, e1 = out.events.size() - 1;
                    const int N = j - out.events[e0].vertical;
                    out.period = N;
                    const Real p0 = out.events[e0].position, p1 = out.events[e1].position;
                    const Polyline<Real> W0 = detail::subarc(out.path, p0, p1);
                    for (int c = 1; c <= prm_.periodic_copies; ++c) {
                        const Point<Real> d{Real(c * N), 0};
                        for (std::size_t v = 1; v < W0.vertices.size(); ++v) out.path.append(W0.vertices[v] + d);
                        for (std::size_t e = e0 + 1; e <= e1; ++e) {
                            DeviationEvent<Real> copy = out.events[e];
                            copy.vertical += c * N;
                            copy.z += d;
                            copy.base += d;
                            copy.position += Real(c) * (p1 - p0);
                            out.events.push_back(copy);
                        }
                    }
                    out.success = true;
                    out.termination = Termination::periodic;
                    return out;
                }
                seen[key] = out.events.size() - 1;
                cur = *dev;
                continue;
            }
        }
        out.path.append(next.base);
        cur = next;
    }
    return fail(FailureKind::step_limit, "step limit reached", prm_.max_steps);
}

template <class Real>
HalfLine<Real> construct_half_line(const PlaneMap<Real>& h, const Polyline<Real>& AB, const Polyline<Real>& BC,
                                   Point<Real> B, const HalfLineParams<Real>& prm, Point<Real> start_dir = {0, 1}) {
    HalfLineBuilder<Real> b(h, prm);
    return b.run(AB, BC, B, start_dir);
}

namespace detail {

template <class Real>
Point<Real> flip(Point<Real> p) { return {p.x, -p.y}; }

template <class Real>
Polyline<Real> flip(Polyline<Real> L) {
    for (auto& v : L.vertices) v = flip(v);
    if (L.start_ray) L.start_ray = flip(*L.start_ray);
    if (L.end_ray) L.end_ray = flip(*L.end_ray);
    return L;
}

} // namespace detail

// L_2: the same construction started downward, run on the conjugate of h by
// (x, y) -> (x, -y) and mapped back. prm.y0 refers to the conjugate map.
template <class Real>
HalfLine<Real> construct_lower_half_line(const PlaneMap<Real>& h, const Polyline<Real>& AB, const Polyline<Real>& BC,
                                         Point<Real> B, const HalfLineParams<Real>& prm) {
    const auto r = reflected(h);
    auto L = construct_half_line(r, detail::flip(AB), detail::flip(BC), detail::flip(B), prm);
    L.path = detail::flip(L.path);
    for (auto& s : L.steps) {
        s.base = detail::flip(s.base);
        s.direction = detail::flip(s.direction);
        s.translation_arc = detail::flip(s.translation_arc);
    }
    for (auto& e : L.events) {
        e.z = detail::flip(e.z);
        e.base = detail::flip(e.base);
    }
    return L;
}

// L = L_2 reversed followed by L_1; both must start at the same point.
template <class Real>
Polyline<Real> join_half_lines(const Polyline<Real>& L1, const Polyline<Real>& L2) {
    Polyline<Real> out;
    out.vertices.assign(L2.vertices.rbegin(), L2.vertices.rend());
    for (std::size_t i = 1; i < L1.vertices.size(); ++i) out.append(L1.vertices[i]);
    out.start_ray = L2.end_ray;
    out.end_ray = L1.end_ray;
    return out;
}

} // namespace flatfix::brouwer
