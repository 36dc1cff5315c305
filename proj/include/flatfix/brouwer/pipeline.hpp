#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatfix/brouwer/catalog.hpp"
#include "flatfix/brouwer/half_line.hpp"
#include "flatfix/brouwer/periodicity.hpp"
#include "flatfix/brouwer/verify.hpp"

namespace flatfix::brouwer {

enum class Verdict { verified, failed_honestly, ambiguous };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::verified: return "verified";
        case Verdict::ambiguous: return "ambiguous";
        default: return "failed-honestly";
    }
}

template <class Real>
struct PipelineOptions {
    HalfLineParams<Real> half_line{};
    Rect<Real> window{-4, 4, -4, 4};
    Real coarse_resolution = Real(1) / 256;
    Real fine_resolution = Real(1) / 512;
    Real twist_search = 8;  // twist levels searched on [-twist_search, twist_search]
    int period_max = 16;

    PipelineOptions() { half_line.abut.t_max = 8; }
};

template <class Real>
struct PipelineReport {
    std::string map;
    Polyline<Real> AB, BC;
    HalfLine<Real> L1;
    std::optional<HalfLine<Real>> L2;
    std::optional<Polyline<Real>> line;  // L2 reversed, then L1
    bool L1_disjoint = false;
    std::optional<BrouwerLineReport<Real>> coarse, fine;
    std::optional<Periodicity<Real>> periodicity;
    std::optional<VerticalCrossings<Real>> crossings;
    Verdict verdict = Verdict::failed_honestly;
    std::string message;
};

// Catalog map -> translation arc -> L1 (and L2 when L1 starts upward) ->
// verification at two resolutions -> periodicity scan.
template <class Real>
PipelineReport<Real> run_brouwer_pipeline(const std::string& name, const PipelineOptions<Real>& opt = {}) {
    PipelineReport<Real> rep;
    rep.map = name;
    const auto fx = brouwer_fixture<Real>(name);
    auto ambiguous = [&](const std::string& why) {
        rep.verdict = Verdict::ambiguous;
        rep.message = why;
        return rep;
    };
    try {
        if (fx.h.periodic) {
            try {
                rep.crossings = vertical_crossings(fx.h, 0, opt.half_line.crossing_y_min, opt.half_line.crossing_y_max,
                                                   opt.half_line.crossing_step);
            } catch (const ResolutionLimit&) {
            }
        }
        HalfLineParams<Real> hp = opt.half_line;
        if (fx.use_twist_level) hp.y0 = twist_level(fx.h, -opt.twist_search, opt.twist_search);
        rep.AB = fx.AB;
        rep.BC = sample_image<Real>(fx.h.forward, fx.AB, hp.abut.resolution).image;
        rep.L1 = construct_half_line(fx.h, fx.AB, rep.BC, fx.B, hp, fx.start_dir);
        rep.periodicity = detect_eventual_periodicity(rep.L1, 1, opt.period_max);
        if (!rep.L1.success) {
            if (rep.L1.failure == FailureKind::tangency_ambiguous) return ambiguous(rep.L1.message);
            rep.message = std::string("L1: ") + to_string(rep.L1.failure) + ": " + rep.L1.message;
            return rep;
        }
        rep.L1_disjoint = image_disjoint(fx.h, rep.L1.path, opt.window, opt.coarse_resolution);
        if (!(fx.start_dir.y > 0)) {
            // Sideways starts yield a half line only; disjointness is all that is checked.
            rep.verdict = rep.L1_disjoint ? Verdict::verified : Verdict::failed_honestly;
            rep.message = rep.L1_disjoint ? "half line verified" : "h(L1) meets L1";
            return rep;
        }
        HalfLineParams<Real> hp2 = hp;
        if (fx.use_twist_level) hp2.y0 = twist_level(reflected(fx.h), -opt.twist_search, opt.twist_search);
        rep.L2 = construct_lower_half_line(fx.h, fx.AB, rep.BC, fx.B, hp2);
        if (!rep.L2->success) {
            if (rep.L2->failure == FailureKind::tangency_ambiguous) return ambiguous(rep.L2->message);
            rep.message = std::string("L2: ") + to_string(rep.L2->failure) + ": " + rep.L2->message;
            return rep;
        }
        rep.line = join_half_lines(rep.L1.path, rep.L2->path);
        rep.coarse = verify_brouwer_line(fx.h, *rep.line, opt.window, opt.coarse_resolution);
        rep.fine = verify_brouwer_line(fx.h, *rep.line, opt.window, opt.fine_resolution);
        const bool ok = rep.L1_disjoint && rep.coarse->passed() && rep.fine->passed();
        rep.verdict = ok ? Verdict::verified : Verdict::failed_honestly;
        rep.message = ok ? "Brouwer line verified at both resolutions"
                         : "verification failed: " + (rep.coarse->passed() ? rep.fine->detail : rep.coarse->detail);
    } catch (const TangencyAmbiguous& e) {
        return ambiguous(e.what());
    } catch (const SamplingInconclusive& e) {
        return ambiguous(e.what());
    } catch (const ResolutionLimit& e) {
        return ambiguous(e.what());
    } catch (const Error& e) {
        rep.verdict = Verdict::failed_honestly;
        rep.message = e.what();
    }
    return rep;
}

} // namespace flatfix::brouwer
