#include "cmclab/barrier.hpp"
#include "cmclab/domain.hpp"
#include "cmclab/errors.hpp"

#include "common.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <limits>
#include <numbers>

using namespace cmclab;
using cmclab::test::slab03;

TEST(Domain, StripTranslationMovesTheAxis)
{
    const double eps = -0.05;
    const Isometry T = strip_translation(eps);
    const Vec4 top = T.apply(Vec4(1, 0, 0, 1)), bottom = T.apply(Vec4(1, 0, 0, -1));
    EXPECT_NEAR((top.tail<3>() / top[0] - Vec3(0, eps, std::sqrt(1 - eps * eps))).norm(), 0.0, 1e-14);
    EXPECT_NEAR((bottom.tail<3>() / bottom[0] - Vec3(0, eps, -std::sqrt(1 - eps * eps))).norm(), 0.0, 1e-14);
}

TEST(Domain, ExitArcReachesTheSphere)
{
    const SlabChart& c = slab03().chart;
    const double R = 3.0;
    for (double f : {0.0, 0.4, 1.0}) {
        const double l = c.spec().lambda1 + f * (c.spec().lambda2 - c.spec().lambda1);
        const ExitArc e = exit_arc(c, l, R);
        EXPECT_NEAR(dist_H3({}, c.to_ball({l, 1.0, e.Z})), R, 1e-10);
        EXPECT_NEAR(dist_H3({}, c.to_ball({l, 1.0, -e.Z})), R, 1e-10);
        if (f > 0.0 && f < 1.0) {
            const double h = 1e-6;
            EXPECT_NEAR(e.dZ, (exit_arc(c, l + h, R).Z - exit_arc(c, l - h, R).Z) / (2 * h), 1e-5 * std::abs(e.dZ) + 1e-6);
        }
    }
    try {
        exit_arc(c, c.spec().lambda1, 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::precondition);
    }
}

// The crossing angle lands on the translated lambda1 catenoid.
TEST(Domain, StripAngleLiesOnTranslatedWall)
{
    const auto& s = slab03();
    const SlabChart& c = s.chart;
    const Isometry back = s.field.translation().inverse();
    for (double f : {0.1, 0.8})
        for (double z : {-2.0, 0.0, 1.5}) {
            const double l = c.spec().lambda1 + f * (c.spec().lambda2 - c.spec().lambda1);
            const double G = s.field.G(l, z);
            EXPECT_GT(G, 0.0);
            EXPECT_LT(G, std::numbers::pi);
            EXPECT_NEAR(G, s.field.G(l, -z), 1e-10);
            const SlabPoint pre = c.from_ball(back.apply(c.to_ball({l, G, z})));
            EXPECT_NEAR(pre.lambda, c.spec().lambda1, 1e-9);
        }
}

TEST(Domain, SpiralProfile)
{
    const SpiralProfile sp{0.5, 0.6};
    for (double th : {-40.0, -1.0, 0.0, 2.5}) {
        EXPECT_NEAR(sp.theta(sp.lambda(th)), th, 1e-9 * std::max(1.0, th * th));
        EXPECT_GT(sp.slope(th), 0.0);
    }
    EXPECT_DOUBLE_EQ(sp.lambda(0.0), 0.55);
    EXPECT_NEAR(sp.lambda(1e8), 0.6, 1e-9);
    EXPECT_THROW(sp.theta(0.6), Error);
}

TEST(Domain, NestedDomainsAndBoundary)
{
    const auto& s = slab03();
    double prev_minus = std::numeric_limits<double>::infinity(), prev_plus = -std::numeric_limits<double>::infinity(), prev_trace = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 3; ++n) {
        const Omega om(s.field, n, default_radius(n));
        const BoundaryCurve g = build_gamma(om, s.spiral, 24, 48);
        EXPECT_TRUE(loop_is_simple(g));
        EXPECT_LT(g.walls.minus, prev_minus);
        EXPECT_GT(g.walls.plus, prev_plus);
        prev_minus = g.walls.minus;
        prev_plus = g.walls.plus;
        // alpha arcs sit on the strip walls, beta arcs on the spiral; the corners on both
        for (const SlabPoint& p : g.alpha_plus) EXPECT_NEAR(p.theta, om.G(p.lambda, p.z), 1e-12);
        for (const SlabPoint& p : g.alpha_minus) EXPECT_NEAR(p.theta, -om.G(p.lambda, p.z), 1e-12);
        for (const SlabPoint& p : g.beta_plus) EXPECT_NEAR(p.lambda, s.spiral.lambda(p.theta), 1e-9);
        for (const SlabPoint& p : g.beta_minus) EXPECT_NEAR(p.lambda, s.spiral.lambda(p.theta), 1e-9);
        for (const SlabPoint& p : g.loop()) EXPECT_TRUE(om.contains(p, 1e-9));
        EXPECT_EQ(g.alpha_plus.back().lambda, g.beta_plus.front().lambda);
        EXPECT_EQ(g.alpha_plus.back().z, g.beta_plus.front().z);
        const double t = spiral_trace_distance(g, s.chart);
        EXPECT_LT(t, prev_trace);
        prev_trace = t;
        const ConvexityReport hc = h_convexity(om, 6);
        EXPECT_NEAR(hc.cap_min, 1.0 / std::tanh(om.R()), 1e-5);
        EXPECT_NEAR(hc.strip_min, 0.3, 1e-6);
    }
}

TEST(Barrier, DisksAreMaximalAndClearOfTheOrigin)
{
    const auto& s = slab03();
    const BarrierOptions opts{3, 1024};
    const auto [a, b] = barrier_disks(s.chart, s.spiral, 0.5, true, opts);
    for (const BarrierDisk& d : {a, b}) {
        EXPECT_NEAR(sphere_angle(d.circle.center, d.p), d.circle.angular_radius, 1e-9);
        const double gap = spiral_gap(s.chart, s.spiral, 0.5, true, d.circle, opts);
        EXPECT_GE(gap, -1e-12);
        // enlarge the disk while keeping the tangency point
        const Vec3 axis = d.p.cross(d.circle.center).normalized();
        const double grow = 0.05 * d.circle.angular_radius;
        const Vec3 c2 = Eigen::AngleAxisd(grow, axis) * d.circle.center;
        EXPECT_LT(spiral_gap(s.chart, s.spiral, 0.5, true, {c2, d.circle.angular_radius + grow}, opts), 0.0);
        EXPECT_NEAR(d.surface.mean_curvature(), 0.3, 1e-12);
        EXPECT_GT(d.clearance(BallPoint{}), 0.0);
    }
    EXPECT_NE(a.which, b.which);
}
