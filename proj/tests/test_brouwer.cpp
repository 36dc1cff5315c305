#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "flatfix/brouwer/catalog.hpp"
#include "flatfix/brouwer/crossings.hpp"
#include "flatfix/brouwer/moduli.hpp"
#include "flatfix/brouwer/periodicity.hpp"
#include "flatfix/brouwer/pipeline.hpp"
#include "flatfix/brouwer/predicates.hpp"
#include "flatfix/brouwer/verify.hpp"

using namespace flatfix;
using namespace flatfix::brouwer;
using R = double;

TEST(Brouwer, TranslationGivesVerticalRay) {
    const auto rep = run_brouwer_pipeline<R>("translation");
    EXPECT_EQ(rep.verdict, Verdict::verified);
    ASSERT_TRUE(rep.L1.success);
    ASSERT_EQ(rep.L1.path.vertices.size(), 1u);
    ASSERT_TRUE(rep.L1.path.end_ray);
    EXPECT_EQ(*rep.L1.path.end_ray, (Point<R>{0, 1}));
}

TEST(Brouwer, HorizontalLineRejected) {
    const auto h = translation<R>(1);
    const auto L = make_line(Point<R>{0, 0}, Point<R>{1, 0});
    const auto rep = verify_brouwer_line(h, L, Rect<R>{-4, 4, -4, 4}, 1.0 / 256);
    EXPECT_FALSE(rep.passed());
    const auto V = make_line(Point<R>{0.5, 0}, Point<R>{0, 1});
    EXPECT_TRUE(verify_brouwer_line(h, V, Rect<R>{-4, 4, -4, 4}, 1.0 / 256).passed());
}

TEST(Brouwer, FiniteEndsCannotBeVerified) {
    EXPECT_THROW(verify_brouwer_line(translation<R>(1), make_ray(Point<R>{0, 0}, Point<R>{0, 1}), Rect<R>{-1, 1, -1, 1}, 0.01),
                 ProperEndsUnresolved);
}

TEST(Brouwer, CompactifiedShearVerifiedAtTwoResolutions) {
    const auto rep = run_brouwer_pipeline<R>("compactified-shear");
    EXPECT_EQ(rep.L1.termination, Termination::twist_region);
    ASSERT_TRUE(rep.coarse && rep.fine);
    EXPECT_TRUE(rep.coarse->passed());
    EXPECT_TRUE(rep.fine->passed());
}

TEST(Brouwer, TangentShiftIsAmbiguous) {
    EXPECT_EQ(run_brouwer_pipeline<R>("tangent-shift").verdict, Verdict::ambiguous);
}

TEST(Brouwer, TranslationArcPredicate) {
    const auto h = translation<R>(1);
    EXPECT_TRUE(is_translation_arc(h, make_segment(Point<R>{0, 0}, Point<R>{1, 0}), 1e-12));
    EXPECT_FALSE(is_translation_arc(h, make_segment(Point<R>{0, 0}, Point<R>{2, 0}), 1e-12));
}

TEST(Crossings, TranslationHasNone) {
    EXPECT_TRUE(vertical_crossings(translation<R>(1), 0, -4.0, 4.0).degenerate());
}

TEST(Crossings, TwoCrossingFixture) {
    const auto c = vertical_crossings(two_crossing<R>(), 0, -4.0, 4.0);
    EXPECT_EQ(c.w.size(), 2u);
    const auto c3 = vertical_crossings(two_crossing<R>(), 3, -4.0, 4.0);
    for (std::size_t i = 0; i < c.w.size(); ++i) EXPECT_EQ(c3.w[i], (c.w[i] + Point<R>{3, 0}));
}

TEST(Moduli, Monotone) {
    const auto h = compactified_shear<R>();
    R prev = std::numeric_limits<R>::infinity();
    for (int n = 1; n <= 3; ++n) {
        const auto m = moduli(h, n, 1.0 / 16);
        EXPECT_LE(m.eps_n, prev);
        EXPECT_GT(m.eta_n, 0);
        EXPECT_LE(m.eta_n, m.eps_n / 2);
        prev = m.eps_n;
    }
}

TEST(PlaneMap, CompactifyRoundtrip) {
    for (R y : {1e-9, 0.1, 0.5, 0.9, 1 - 1e-9}) {
        const Point<R> p{0.3, y};
        EXPECT_NEAR(decompactify_point(compactify_point(p)).y, y, 1e-12);
    }
    EXPECT_THROW(compactify_point(Point<R>{0, 1}), BoundaryPoint);
}

TEST(Sampling, NonFiniteImageIsInconclusive) {
    const auto bad = [](Point<R> p) { return Point<R>{1 / p.x, p.y}; };
    EXPECT_THROW(sample_image<R>(bad, make_segment(Point<R>{-1, 0}, Point<R>{0, 0}), 0.01), SamplingInconclusive);
}

namespace {

std::vector<DeviationEvent<R>> events_on(std::vector<std::pair<int, int>> labels, Polyline<R>& L) {
    std::vector<DeviationEvent<R>> ev;
    R s = 0;
    for (auto [vert, arc] : labels) {
        L.append({R(vert), R(arc)});
        DeviationEvent<R> e;
        e.vertical = vert;
        e.arc = arc;
        e.side = Side::left;
        e.position = s;
        ev.push_back(e);
        s += 1;
    }
    return ev;
}

} // namespace

TEST(Periodicity, SyntheticLogRepeatingEveryTwoVerticals) {
    Polyline<R> L;
    L.append({-1, 0});
    std::vector<DeviationEvent<R>> ev;
    // Staircase repeating every two verticals: labels (0, 1, 0, 1, ...).
    R s = 0;
    for (int i = 0; i < 6; ++i) {
        DeviationEvent<R> e;
        e.vertical = i;
        e.arc = i % 2;
        e.side = Side::right;
        e.position = s;
        ev.push_back(e);
        L.append({R(i), 0});
        s = R(i + 1);
    }
    const auto p = detect_eventual_periodicity(L, ev, 1, 8);
    ASSERT_TRUE(p);
    EXPECT_EQ(p->N, 2);
}

TEST(Periodicity, NonRepeatingLog) {
    Polyline<R> L;
    const auto ev = events_on({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, L);
    EXPECT_FALSE(detect_eventual_periodicity(L, ev, 1, 8));
}
