#include <gtest/gtest.h>

#include "flatfix/core/polyline.hpp"
#include "flatfix/core/quasi_random.hpp"

using namespace flatfix;
using R = double;

TEST(Point, Arithmetic) {
    const Point<R> a{1, 2}, b{3, -1};
    EXPECT_EQ(a + b, (Point<R>{4, 1}));
    EXPECT_DOUBLE_EQ(cross(a, b), -7);
    EXPECT_DOUBLE_EQ(dot(a, b), 1);
    EXPECT_DOUBLE_EQ(sup_norm(a - b), 3);
}

TEST(Segment, CrossingAndParallel) {
    const Segment<R> s1{{0, 0}, {2, 0}}, s2{{1, -1}, {1, 1}}, s3{{0, 1}, {2, 1}};
    const auto hit = intersect(s1, s2, 0.0);
    ASSERT_TRUE(hit);
    EXPECT_NEAR(hit->point.x, 1, 1e-15);
    EXPECT_NEAR(hit->t, 0.5, 1e-15);
    EXPECT_FALSE(intersect(s1, s3, 0.0));
}

TEST(Polyline, RaysTruncateAndTranslate) {
    auto ray = make_ray(Point<R>{0, 0}, Point<R>{0, 1});
    ASSERT_TRUE(ray.end_ray);
    const auto t = ray.truncated(5);
    EXPECT_EQ(t.back(), (Point<R>{0, 5}));
    EXPECT_EQ(ray.translated({2, 0}).front(), (Point<R>{2, 0}));
}

TEST(Polyline, AppendMergesCollinear) {
    Polyline<R> L;
    L.append({0, 0});
    L.append({1, 0});
    L.append({2, 0});
    L.append({2, 0});
    L.append({2, 1});
    EXPECT_EQ(L.vertices.size(), 3u);
    EXPECT_DOUBLE_EQ(L.length(), 3);
    EXPECT_EQ(L.point_at(2.5), (Point<R>{2, 0.5}));
}

TEST(Polyline, PointInPolygonAndDiagnostics) {
    const auto sq = make_rectangle(Rect<R>{0, 1, 0, 1});
    EXPECT_TRUE(point_in_polygon(Point<R>{0.5, 0.5}, sq.vertices));
    EXPECT_FALSE(point_in_polygon(Point<R>{1.5, 0.5}, sq.vertices));
    EXPECT_TRUE(diagnose(sq, 1e-12).simple);
    Polyline<R> bow{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
    bow.closed = true;
    EXPECT_FALSE(diagnose(bow, 1e-12).simple);
}

TEST(Halton, FirstPointsAndRange) {
    EXPECT_DOUBLE_EQ(radical_inverse<R>(1, 2), 0.5);
    EXPECT_DOUBLE_EQ(radical_inverse<R>(3, 2), 0.75);
    EXPECT_NEAR(radical_inverse<R>(1, 3), 1.0 / 3, 1e-15);
    const Rect<R> box{-1, 1, 2, 3};
    for (int i = 0; i < 1000; ++i) EXPECT_TRUE(box.contains(halton_point<R>(i, box)));
}
