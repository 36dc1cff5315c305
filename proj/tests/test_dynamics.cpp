#include <gtest/gtest.h>

#include <cmath>

#include "flatfix/construction/counterexample.hpp"
#include "flatfix/dynamics/displacement.hpp"
#include "flatfix/dynamics/fixed_points.hpp"
#include "flatfix/dynamics/index.hpp"
#include "flatfix/dynamics/reference_maps.hpp"
#include "flatfix/dynamics/sweep.hpp"

using namespace flatfix;
using namespace flatfix::dynamics;
using LD = long double;

TEST(Index, WindingNumbersOfModelFields) {
    const auto circle = make_circle(Point<double>{0, 0}, 1.0, 12);
    auto wn = [&](auto field) { return winding_number<double>(field, circle); };
    EXPECT_EQ(wn([](Point<double> z) { return z; }), 1);
    EXPECT_EQ(wn([](Point<double> z) { return Point<double>{z.x, -z.y}; }), -1);
    EXPECT_EQ(wn([](Point<double> z) { return Point<double>{z.x * z.x - z.y * z.y, 2 * z.x * z.y}; }), 2);
    EXPECT_EQ(wn([](Point<double> z) { return z + Point<double>{3, 0}; }), 0);
    EXPECT_THROW(wn([](Point<double> z) { return Point<double>{z.x, 0}; }), DisplacementVanishesOnLoop);
}

TEST(FixedPoints, ShearNegativeShiftGivesFixedCircle) {
    const auto f = translate_eps(shear_map<LD>(), -0.01L);
    const auto recs = find_fixed_points(f, Rect<LD>{0, 1, 0.005L, 0.02L}, LD(1) / 600, 1e-10L);
    ASSERT_FALSE(recs.empty());
    for (const auto& r : recs) {
        EXPECT_TRUE(r.degenerate);
        EXPECT_NEAR(static_cast<double>(r.location.y), 0.01, 1e-4);
        EXPECT_LE(r.residual, 1e-10L);
    }
}

TEST(FixedPoints, NoRecordsForPositiveShift) {
    for (LD eps : {0.002L, 0.05L}) {
        EXPECT_TRUE(find_fixed_points(translate_eps(shear_map<LD>(), eps), Rect<LD>{0, 1, 1e-4L, 1}, LD(1) / 200, 1e-10L).empty());
        EXPECT_TRUE(find_fixed_points(translate_eps(twist_map<LD>(), eps), Rect<LD>{0, 1, 1e-4L, 1}, LD(1) / 200, 1e-10L).empty());
    }
}

TEST(FixedPoints, CounterexampleLevelFound) {
    construction::CounterexampleSpec<LD> spec;
    const auto pd = construction::predicted_fixed_data(spec, 5);
    const auto f = translate_eps(construction::build_annulus_map(spec), pd.epsilon);
    const auto recs = find_fixed_points(f, Rect<LD>{-0.5L, 0.5L, 0.1L, 0.6L}, LD(1) / 1200, 1e-10L);
    ASSERT_FALSE(recs.empty());
    LD best = 1;
    for (const auto& r : recs) best = std::min(best, r.distance_to(pd.point));
    EXPECT_LE(best, 1e-8L);
}

TEST(Displacement, ShearCertificate) {
    const auto cert = min_displacement(translate_eps(shear_map<LD>(), 0.05L), Rect<LD>{0, 1, 1e-4L, 1}, LD(1) / 100);
    EXPECT_GE(cert.min_displacement, 0.05L);
    EXPECT_TRUE(cert.certified());
}

TEST(LiftMap, BoundaryTwist) {
    EXPECT_TRUE(boundary_twist(shear_map<LD>()).positive());
    EXPECT_TRUE(boundary_twist(twist_map<LD>()).positive());
    EXPECT_FALSE(boundary_twist(identity_map<LD>()).positive());
    EXPECT_THROW(reference_map<LD>("nope"), ConfigError);
}

TEST(Sweep, EveryEntryHasRecordOrCertificate) {
    SweepOptions<LD> opt;
    opt.window = {0, 1, 0.005L, 0.05L};
    opt.grid_step = LD(1) / 300;
    const auto res = run_sweep(shear_map<LD>(), {0.01L, -0.01L, 0}, opt);
    ASSERT_EQ(res.entries.size(), 3u);
    EXPECT_EQ(res.epsilon_grid.front(), -0.01L);
    for (const auto& e : res.entries) EXPECT_TRUE(!e.records.empty() || e.certificate);
    EXPECT_FALSE(res.entries[0].records.empty());
    EXPECT_TRUE(res.entries[1].boundary_fixed_line);
    EXPECT_TRUE(res.entries[1].records.empty());
    EXPECT_TRUE(res.entries[2].certificate && res.entries[2].certificate->certified());
}
