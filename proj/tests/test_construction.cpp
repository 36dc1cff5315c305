#include <gtest/gtest.h>

#include <cmath>

#include "flatfix/construction/counterexample.hpp"
#include "flatfix/construction/dyadic_chart.hpp"

using namespace flatfix;
using namespace flatfix::construction;
using LD = long double;

namespace {

void expect_rel(LD got, LD want, LD rel) {
    EXPECT_LE(std::abs(got - want), rel * std::abs(want)) << static_cast<double>(got) << " vs " << static_cast<double>(want);
}

} // namespace

// Reference values from an independent 40-digit evaluation of h'(t) = e^{-1/t}/t^2.
TEST(Construction, LevelsAgainstFrozenOracle) {
    expect_rel(m_k<LD>(4), 2.472683274657187046563081e-7L, 1e-15L);
    expect_rel(s_k<LD>(4), 2.880900472813033331552645e-5L, 1e-15L);
    expect_rel(m_k<LD>(5), 5.373775702238721602593247e-16L, 1e-15L);
    expect_rel(s_k<LD>(6), 6.569209407687220645790052e-25L, 1e-15L);
    CounterexampleSpec<LD> spec;
    expect_rel(predicted_fixed_data(spec, 4).epsilon, 3.956293239451499274500929e-6L, 1e-15L);
    expect_rel(predicted_fixed_data(spec, 6).epsilon, 1.015223389381802302705307e-32L, 1e-14L);
    expect_rel(predicted_fixed_data(spec, 10).epsilon, 3.295070749566936764080044e-586L, 1e-12L);
}

TEST(Construction, PredictedPointHeights) {
    CounterexampleSpec<LD> spec;
    for (int k = 4; k <= 12; ++k) {
        const auto pd = predicted_fixed_data(spec, k);
        EXPECT_EQ(pd.point.y, 3 * std::ldexp(LD(1), spec.k0 - k - 2));
        EXPECT_EQ(pd.point.x, pd.epsilon);
    }
    EXPECT_THROW(predicted_fixed_data(spec, 3), ConfigError);
}

TEST(Construction, DyadicChartAndBands) {
    const DyadicChart<LD> ch{5};
    const Point<LD> c = ch.center();
    EXPECT_EQ(ch.forward(c), (Point<LD>{0, 0}));
    EXPECT_EQ(ch.inverse(ch.forward(Point<LD>{0.01L, 0.02L})), (Point<LD>{0.01L, 0.02L}));
    EXPECT_EQ(*band_of<LD>(c.y), 5);
    EXPECT_EQ(*band_of<LD>(std::ldexp(LD(1), -5)), 5);  // upper edge belongs to the band
    EXPECT_EQ(*band_of<LD>(std::ldexp(LD(1), -5) * 0.999L), 5);
    EXPECT_EQ(*band_of<LD>(std::ldexp(LD(1), -6) * 1.001L), 5);
    EXPECT_FALSE(band_of<LD>(0));
}

TEST(Construction, PsiIsIdentityAwayFromBalls) {
    CounterexampleSpec<LD> spec;
    const Point<LD> far{0.3L, 0.1L};
    EXPECT_EQ(psi(spec, far), far);
    const Point<LD> edge{0, std::ldexp(LD(1), -6)};
    EXPECT_EQ(p_eval(spec, edge), edge.y);
}

TEST(Construction, PsiRotatesInnerBallByPi) {
    CounterexampleSpec<LD> spec;
    const DyadicChart<LD> ch{6};
    const Point<LD> p = ch.center() + Point<LD>{ch.inner_radius() / 2, ch.inner_radius() / 3};
    const Point<LD> q = psi(spec, p);
    EXPECT_LE(sup_norm(q - (2 * ch.center() - p)), 1e-18L);
}

// grad g on the band edge is (0, h'(2^-k)) and at p_k is (0, -h'(3 2^-(k+2))).
TEST(Construction, GradientIdentities) {
    CounterexampleSpec<LD> spec;
    for (int k = 4; k <= 12; ++k) {
        const Point<LD> top = g_grad(spec, Point<LD>{0, std::ldexp(LD(1), -k)});
        EXPECT_EQ(top.x, 0);
        expect_rel(top.y, s_k<LD>(k), 1e-15L);
        const Point<LD> at_pk = g_grad(spec, p_k<LD>(k));
        EXPECT_LE(std::abs(at_pk.x), 1e-15L * m_k<LD>(k));
        expect_rel(at_pk.y, -m_k<LD>(k), 1e-15L);
    }
}

TEST(Construction, PJetAgainstFiniteDifferences) {
    CounterexampleSpec<LD> spec;
    const DyadicChart<LD> ch{5};
    const LD r = ch.support_radius();
    const LD h = r * 1e-6L;
    for (int i = 0; i < 8; ++i) {
        const LD a = i * 0.7L;
        const Point<LD> p = ch.center() + Point<LD>{0.8L * r * std::cos(a), 0.8L * r * std::sin(a)};
        const Point<LD> fd{(p_eval(spec, p + Point<LD>{h, 0}) - p_eval(spec, p - Point<LD>{h, 0})) / (2 * h),
                           (p_eval(spec, p + Point<LD>{0, h}) - p_eval(spec, p - Point<LD>{0, h})) / (2 * h)};
        EXPECT_LE(norm(fd - p_jet(spec, p).grad), 1e-7L);
    }
}

TEST(Construction, LogGradientMatchesDirectWhereRepresentable) {
    CounterexampleSpec<LD> spec;
    const Point<LD> p = p_k<LD>(7) + Point<LD>{1e-4L, 0};
    const auto lg = g_grad_log(spec, p);
    const Point<LD> direct = g_grad(spec, p);
    EXPECT_LE(norm(std::exp(lg.log_scale) * lg.direction - direct), 1e-15L * norm(direct));
}

TEST(Construction, StripMapAndAnnulusMap) {
    CounterexampleSpec<LD> spec;
    EXPECT_NO_THROW(build_strip_map(spec));
    const auto f = build_annulus_map(spec);
    const Point<LD> p{0.3L, 0.5L};
    EXPECT_LE(sup_norm(f.inverse(f.forward(p)) - p), 1e-11L);
    EXPECT_LE(sup_norm(f.forward(p + Point<LD>{1, 0}) - f.forward(p) - Point<LD>{1, 0}), 1e-15L);
    EXPECT_THROW(f.forward(Point<LD>{0, 1.5L}), OutOfDomain);
    spec.k0 = 1;
    EXPECT_THROW(build_strip_map(spec), ContractionFailure);
}

TEST(Construction, SpecValidation) {
    CounterexampleSpec<LD> spec;
    spec.k_max = 5;
    EXPECT_THROW(spec.validate(), ConfigError);
}
