#include <gtest/gtest.h>

#include <cmath>

#include "flatfix/construction/counterexample.hpp"
#include "flatfix/dynamics/reference_maps.hpp"
#include "flatfix/genfun/implicit_map.hpp"

using namespace flatfix;
using LD = long double;

TEST(Genfun, ZeroFieldIsIdentity) {
    const auto g = genfun::zero_field<LD>();
    const Point<LD> p{0.3L, 0.7L};
    EXPECT_EQ(genfun::solve_forward(g, p), p);
    EXPECT_EQ(genfun::solve_inverse(g, p), p);
}

// g = c X y: x = X - c X, Y = y - c y. Closed form against the iterative solve.
TEST(Genfun, BilinearClosedForm) {
    const auto g = genfun::bilinear_field<LD>(0.2L);
    const Point<LD> img = genfun::solve_forward(g, Point<LD>{0.3L, 0.4L});
    EXPECT_NEAR(static_cast<double>(img.x), 0.375, 1e-15);
    EXPECT_NEAR(static_cast<double>(img.y), 0.32, 1e-15);
}

// Bisection on x = X - g_y(X, y) for the twist field, independent of the
// Newton solve used by solve_forward.
TEST(Genfun, TwistForwardAgainstBisection) {
    const auto g = dynamics::twist_field<LD>(0.2L);
    const Point<LD> p{0.37L, 0.61L};
    LD lo = p.x - 1, hi = p.x + 1;
    for (int i = 0; i < 200; ++i) {
        const LD mid = (lo + hi) / 2;
        (mid - g.grad(mid, p.y).y < p.x ? lo : hi) = mid;
    }
    const Point<LD> img = genfun::solve_forward(g, p);
    EXPECT_NEAR(static_cast<double>(img.x), static_cast<double>(lo), 1e-14);
    EXPECT_NEAR(static_cast<double>(img.y), static_cast<double>(p.y - g.grad(lo, p.y).x), 1e-14);
}

TEST(Genfun, RoundtripAndAreaOnTwist) {
    const auto g = dynamics::twist_field<LD>(0.2L);
    const auto m = genfun::make_strip_map(g, Rect<LD>{-1, 2, 0, 1});
    for (int i = 1; i < 20; ++i) {
        const Point<LD> p{LD(i) / 20, LD(i) / 21};
        EXPECT_LE(sup_norm(m.inverse(m.forward(p)) - p), 1e-11L);
        EXPECT_NEAR(static_cast<double>(genfun::jacobian_fd(m, p).det()), 1.0, 1e-6);
    }
}

TEST(Genfun, JacobianStencilOutsideRegionThrows) {
    const auto m = genfun::make_strip_map(dynamics::twist_field<LD>(0.2L), Rect<LD>{0, 1, 0, 1});
    EXPECT_THROW(genfun::jacobian_fd(m, Point<LD>{0.5L, 0}), OutOfDomain);
}

TEST(Genfun, DisplacementEqualsGradientAtImage) {
    const auto g = dynamics::twist_field<LD>(0.2L);
    const Point<LD> p{0.1L, 0.45L};
    const auto sol = genfun::solve_forward_detail(g, p);
    const Point<LD> grad = g.grad(sol.image.x, p.y);
    EXPECT_NEAR(static_cast<double>(sol.displacement.x), static_cast<double>(grad.y), 1e-15);
    EXPECT_NEAR(static_cast<double>(sol.displacement.y), static_cast<double>(-grad.x), 1e-15);
    EXPECT_LE(sup_norm(sol.image - p - sol.displacement), 1e-15L);
}

TEST(Genfun, ContractionRegion) {
    EXPECT_TRUE(genfun::is_contraction_region(dynamics::twist_field<LD>(0.2L), Rect<LD>{0, 1, 0, 1}));
    EXPECT_FALSE(genfun::is_contraction_region(genfun::bilinear_field<LD>(0.75L), Rect<LD>{0, 1, 0, 1}));
    EXPECT_THROW(dynamics::twist_map<LD>(5.0L), ConfigError);
}

TEST(Genfun, CounterexampleFieldIsFlatAtBoundary) {
    construction::CounterexampleSpec<LD> spec;
    const auto g = construction::make_generating_field(spec);
    const auto rep = genfun::check_hypothesis(g, {-0.03L, 0, 0.01L, 0.03L});
    EXPECT_TRUE(rep.passed);
    EXPECT_FALSE(genfun::check_hypothesis(dynamics::twist_field<LD>(0.2L), {0.1L, 0.3L}).passed);
}

TEST(Genfun, InvalidConfig) {
    genfun::ImplicitSolveConfig<LD> cfg;
    cfg.tolerance = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}
