#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "flatfix/brouwer/catalog.hpp"
#include "flatfix/brouwer/crossings.hpp"
#include "flatfix/brouwer/moduli.hpp"
#include "flatfix/brouwer/pipeline.hpp"
#include "flatfix/checks/result.hpp"
#include "flatfix/core/quasi_random.hpp"

namespace flatfix::checks {

inline std::vector<CheckResult> brouwer_suite(const SuiteConfig& cfg) {
    using R = double;
    std::vector<CheckResult> out;
    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({"brouwer", name, false, false, 0, 0, std::string("error: ") + e.what()});
        }
    };

    std::vector<brouwer::PipelineReport<R>> runs;
    for (const auto& name : brouwer::catalog_names<R>()) runs.push_back(brouwer::run_brouwer_pipeline<R>(name));

    guarded("verification stable under refinement", [&] {
        CheckResult r{"brouwer", "verification stable under refinement"};
        std::size_t bad = 0;
        for (const auto& run : runs) {
            if (!run.coarse) continue;
            ++r.samples;
            if (run.coarse->passed() && !(run.fine && run.fine->passed())) {
                ++bad;
                r.detail += run.map + " fails at the finer resolution; ";
            }
        }
        r.passed = bad == 0 && r.samples > 0;
        r.detail += std::to_string(r.samples) + " verified lines re-checked";
        return r;
    });

    guarded("h(L1) misses L1", [&] {
        CheckResult r{"brouwer", "h(L1) misses L1"};
        std::size_t bad = 0;
        for (const auto& run : runs) {
            if (!run.L1.success) continue;
            ++r.samples;
            if (!run.L1_disjoint) {
                ++bad;
                r.detail += run.map + "; ";
            }
        }
        r.passed = bad == 0 && r.samples > 0;
        r.detail += std::to_string(r.samples) + " successful half lines";
        return r;
    });

    guarded("vertical crossings equivariant", [&] {
        CheckResult r{"brouwer", "vertical crossings equivariant"};
        double worst = 0;
        bool same = true;
        for (const char* name : {"two-crossing", "shear-chain"}) {
            const auto h = brouwer::catalog_map<R>(name);
            const auto c0 = brouwer::vertical_crossings<R>(h, 0, -4, 4);
            const auto c3 = brouwer::vertical_crossings<R>(h, 3, -4, 4);
            same = same && c0.w.size() == c3.w.size() && c0.arcs.size() == c3.arcs.size();
            for (std::size_t i = 0; i < c3.w.size() && i < c0.w.size(); ++i) {
                same = same && c3.w[i] == c0.w[i] + Point<R>{3, 0};
                // Direct evaluation at the shifted point.
                const Point<R> img = h.forward(c3.w[i]);
                worst = std::max({worst, std::abs(img.x - 3), std::abs(img.y - c3.w_image[i].y)});
                ++r.samples;
            }
        }
        r.passed = same && worst <= 1e-9 && r.samples > 0;
        r.detail = std::string(same ? "shifted copies match" : "shifted copies differ") + ", max |h(w) - w'| " +
                   std::to_string(worst);
        return r;
    });

    guarded("moduli eps_n nonincreasing", [&] {
        CheckResult r{"brouwer", "moduli eps_n nonincreasing"};
        bool ok = true;
        for (const char* name : {"translation", "tilted-shift", "two-crossing", "compactified-shear"}) {
            const auto h = brouwer::catalog_map<R>(name);
            R prev = std::numeric_limits<R>::infinity();
            for (int n = 1; n <= 3; ++n) {
                const R e = brouwer::moduli(h, n, R(1) / 16).eps_n;
                if (!(e <= prev)) {
                    ok = false;
                    r.detail += std::string(name) + " n = " + std::to_string(n) + "; ";
                }
                prev = e;
                ++r.samples;
            }
        }
        r.passed = ok;
        return r;
    });

    guarded("compactify roundtrip", [&] {
        CheckResult r{"brouwer", "compactify roundtrip"};
        double worst = 0;
        for (int i = 0; i < 2000; ++i) {
            Point<R> p = halton_point<R>(halton_offset(cfg.seed) + i, {-2, 2, 0, 1});
            if (i % 2) p.y = i % 4 == 1 ? std::exp2(-20 * p.y) : 1 - std::exp2(-20 * p.y);
            if (!(p.y > 0 && p.y < 1)) continue;
            const Point<R> back = brouwer::decompactify_point(brouwer::compactify_point(p));
            worst = std::max(worst, sup_norm(back - p));
            ++r.samples;
        }
        r.passed = worst <= 1e-10;
        r.detail = "max error " + std::to_string(worst);
        return r;
    });
    return out;
}

} // namespace flatfix::checks
