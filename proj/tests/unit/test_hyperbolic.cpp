#include "cmclab/errors.hpp"
#include "cmclab/grid_mesh.hpp"
#include "cmclab/hyperbolic.hpp"

#include "common.hpp"

#include <cmath>
#include <numbers>

using namespace cmclab;
using cmclab::test::random_ball_point;

TEST(Hyperbolic, ChartRoundTrip)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const BallPoint p = random_ball_point(rng, 0.99);
        const Vec4 X = to_hyperboloid(p);
        EXPECT_NEAR(lorentz_dot(X, X), -1.0, 1e-10 * X[0] * X[0]);
        EXPECT_NEAR((from_hyperboloid(X).vec() - p.vec()).norm(), 0.0, 1e-12);
    }
}

TEST(Hyperbolic, DistanceFromOrigin)
{
    for (double r : {0.0, 0.1, 0.5, 0.9, 0.999}) {
        const BallPoint p{0.6 * r, 0.8 * r, 0.0};
        EXPECT_NEAR(dist_H3({}, p), 2.0 * std::atanh(r), 1e-10);
    }
}

TEST(Hyperbolic, IsometriesPreserveDistance)
{
    std::mt19937_64 rng(2);
    const Isometry moves[] = {
        Isometry::rotation(Geodesic::z_axis(), 0.7),
        Isometry::translation(Geodesic::x_axis(), 1.3),
        Isometry::translation({{0.6, 0.8, 0}, {0, 0, 1}}, -0.4),
        Isometry::reflection(1),
        Isometry::rotation({{1, 0, 0}, {0, 0.6, 0.8}}, 2.1).then(Isometry::translation(Geodesic::y_axis(), 0.9)),
    };
    for (const Isometry& g : moves) {
        for (int i = 0; i < 50; ++i) {
            const BallPoint p = random_ball_point(rng), q = random_ball_point(rng);
            EXPECT_NEAR(dist_H3(g.apply(p), g.apply(q)), dist_H3(p, q), 1e-10);
        }
    }
}

TEST(Hyperbolic, TranslationMovesOriginAlongAxis)
{
    // Mobius translation by d along the x-axis sends 0 to tanh(d / 2) e_x.
    for (double d : {-2.0, 0.3, 1.5}) {
        const BallPoint q = Isometry::translation(Geodesic::x_axis(), d).apply(BallPoint{});
        EXPECT_NEAR(q.x, std::tanh(d / 2.0), 1e-14);
        EXPECT_NEAR(std::hypot(q.y, q.z), 0.0, 1e-14);
    }
}

TEST(Hyperbolic, RotationActsEuclideanOnBall)
{
    const BallPoint p{0.3, 0.1, -0.2};
    const BallPoint q = Isometry::rotation(Geodesic::z_axis(), std::numbers::pi / 2).apply(p);
    EXPECT_NEAR(q.x, -0.1, 1e-14);
    EXPECT_NEAR(q.y, 0.3, 1e-14);
    EXPECT_NEAR(q.z, -0.2, 1e-14);
}

TEST(Hyperbolic, InverseAndComposition)
{
    std::mt19937_64 rng(3);
    const Isometry a = Isometry::translation({{0, 0.6, 0.8}, {1, 0, 0}}, 0.8);
    const Isometry b = Isometry::rotation(Geodesic::x_axis(), -1.1);
    const Isometry ab = a.then(b);
    for (int i = 0; i < 20; ++i) {
        const BallPoint p = random_ball_point(rng);
        EXPECT_NEAR((ab.apply(p).vec() - b.apply(a.apply(p)).vec()).norm(), 0.0, 1e-12);
        EXPECT_NEAR((ab.inverse().apply(ab.apply(p)).vec() - p.vec()).norm(), 0.0, 1e-12);
    }
}

TEST(Hyperbolic, FermiRoundTripAndAxis)
{
    const Geodesic axis{{0.6, 0.0, 0.8}, {-0.6, 0.0, 0.8}};
    for (double x : {-1.5, 0.0, 0.7})
        for (double r : {0.2, 1.0, 2.5})
            for (double th : {0.1, 2.0, 4.0}) {
                const FermiPoint f = ball_to_fermi(fermi_to_ball({x, r, th}, axis), axis);
                EXPECT_NEAR(f.x, x, 1e-11);
                EXPECT_NEAR(f.r, r, 1e-11);
                EXPECT_NEAR(normalize_angle(f.theta - th + 1e-3) - 1e-3, 0.0, 1e-10);
            }
    const BallPoint on_axis = fermi_to_ball({0.4, 0.0, 0.0}, Geodesic::x_axis());
    EXPECT_NEAR(on_axis.x, std::tanh(0.2), 1e-14);
}

TEST(Hyperbolic, FermiMetric)
{
    auto chart = [](const Eigen::Vector3d& q) { return fermi_to_hyperboloid({q[0], q[1], q[2]}); };
    for (double r : {0.3, 1.2}) {
        const Eigen::Vector3d q(0.5, r, 0.9);
        const Eigen::Matrix3d g = cmclab::test::pullback<3>(chart, q, 1e-5);
        Eigen::Matrix3d expect = Eigen::Matrix3d::Zero();
        expect.diagonal() << std::cosh(r) * std::cosh(r), 1.0, std::sinh(r) * std::sinh(r);
        EXPECT_LT((g - expect).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(Hyperbolic, PlaneFromCircleRoundTrip)
{
    const IdealCircle c{Vec3(1, 2, 2).normalized(), 0.7};
    const GeodesicPlane P = GeodesicPlane::spanning(c);
    const IdealCircle back = P.ideal_boundary();
    EXPECT_NEAR((back.center - c.center).norm(), 0.0, 1e-12);
    EXPECT_NEAR(back.angular_radius, c.angular_radius, 1e-12);
    // the cap around the centre lies on the positive side
    EXPECT_GT(P.signed_distance(BallPoint::from(0.99 * c.center)), 0.0);
}

TEST(Hyperbolic, EquidistantCurvatureIsTanh)
{
    const GeodesicPlane P = GeodesicPlane::spanning({Vec3(0, 0, 1), 1.2});
    for (double t : {-1.0, 0.4, 2.0}) {
        const EquidistantSurface S(P, t);
        EXPECT_DOUBLE_EQ(S.mean_curvature(), std::tanh(std::abs(t)));
        auto chart = [&](double u, double v) { return S.at_hyperboloid(u, v); };
        const CurvatureSample c = chart_mean_curvature(chart, 0.3, -0.2, 1e-4);
        EXPECT_NEAR(std::abs(c.mean_curvature), std::tanh(std::abs(t)), 1e-6);
        EXPECT_NEAR(S.signed_excess(S.at(0.3, -0.2)), 0.0, 1e-12);
        EXPECT_NEAR(P.signed_distance(S.at(0.3, -0.2)), t, 1e-12);
    }
}

TEST(Hyperbolic, Errors)
{
    const BallPoint ideal = BallPoint::ideal_point({0, 0, 1});
    try {
        dist_H3({}, ideal);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ideal_point);
    }
    try {
        axis_frame({{0, 0, 1}, {0, 0, 1}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::invalid_axis);
    }
    EXPECT_THROW(to_hyperboloid(BallPoint{1.0, 0.5, 0.0}), Error);
    EXPECT_THROW(equidistant_surface({Vec3(0, 0, 1), 1.0}, 13.0), Error);
}
