#include "cmclab/catenoid.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/numerics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace cmclab;

namespace {

// x(r) from the first integral by double-exponential quadrature, with the
// square-root singularity at the neck handled through the endpoint distance.
struct MeridianOracle {
    double H, lambda, E;

    MeridianOracle(double H_, double l) : H(H_), lambda(l), E(std::sinh(l) * (std::cosh(l) - H_ * std::sinh(l))) {}

    double rate(double r, double delta) const
    {
        if (r > 300.0) return 0.0; // decays like exp(-r); sinh overflows further out
        const double sh = std::sinh(r), ch = std::cosh(r);
        const double K = E + H * sh * sh, S = sh * ch;
        const double diff = std::sinh(delta) * (std::cosh(r + lambda) - H * std::sinh(r + lambda)); // S - K
        return K / (ch * std::sqrt(diff * (S + K)));
    }

    double x(double r_end) const
    {
        boost::math::quadrature::tanh_sinh<double> ts;
        return ts.integrate(
            [&](double r, double rc) {
                return rate(r, rc < 0.0 ? -rc : r - lambda);
            },
            lambda, r_end, 1e-13);
    }

    double half_distance() const
    {
        const double split = lambda + 1.0;
        boost::math::quadrature::exp_sinh<double> es;
        return x(split) + es.integrate([&](double t) { return rate(split + t, split + t - lambda); }, 0.0,
                                       std::numeric_limits<double>::infinity(), 1e-13);
    }
};

} // namespace

TEST(Catenoid, NeckConstant)
{
    EXPECT_DOUBLE_EQ(neck_constant(0.0, 1.0), std::sinh(1.0) * std::cosh(1.0));
    EXPECT_NEAR(neck_constant(0.5, 0.7), std::sinh(0.7) * (std::cosh(0.7) - 0.5 * std::sinh(0.7)), 1e-15);
}

TEST(Catenoid, HalfDistanceMatchesIndependentQuadrature)
{
    for (double H : {0.0, 0.3, 0.9})
        for (double l : {0.02, 0.5, 3.0}) {
            const MeridianOracle o(H, l);
            const HalfDistance d = half_distance(H, l);
            EXPECT_NEAR(d.value, o.half_distance(), 1e-9) << H << " " << l;
            EXPECT_LT(d.tail_bound, 1e-10);
            EXPECT_DOUBLE_EQ(dh(H, l), 2.0 * d.value);
            EXPECT_NEAR(meridian_x_quadrature(H, l, l + 0.8), o.x(l + 0.8), 1e-10);
        }
}

TEST(Catenoid, ProfileAgreesWithQuadratureAndIsSymmetric)
{
    const CatenoidProfile p = generating_curve(0.6, 0.4);
    EXPECT_DOUBLE_EQ(p.at(0.0).r, 0.4);
    EXPECT_DOUBLE_EQ(p.at(0.0).x, 0.0);
    for (double s : {0.3, 1.7, 4.2}) {
        const MeridianSample a = p.at(s), b = p.at(-s);
        EXPECT_DOUBLE_EQ(a.r, b.r);
        EXPECT_DOUBLE_EQ(a.x, -b.x);
        EXPECT_NEAR(a.x, meridian_x_quadrature(0.6, 0.4, a.r), 1e-9);
        EXPECT_NEAR(p.sigma_of_r(a.r), s, 1e-9);
        // unit speed in the Fermi metric cosh^2 r dx^2 + dr^2
        EXPECT_NEAR(std::cosh(a.r) * std::cosh(a.r) * a.dx * a.dx + a.dr * a.dr, 1.0, 1e-9);
    }
    EXPECT_LT(p.x_of_r(p.at(p.sigma_max()).r), p.d_half());
}

TEST(Catenoid, FirstIntegral)
{
    for (double H : {0.0, 0.3, 0.9})
        for (double l : {0.05, 0.6, 2.0}) EXPECT_LT(generating_curve(H, l).first_integral_drift(), 1e-8);
}

TEST(Catenoid, MaximumIsStationary)
{
    const CatenoidMax m = find_cH(0.3);
    const double h = 1e-4;
    EXPECT_NEAR((dh(0.3, m.c_H + h) - dh(0.3, m.c_H - h)) / (2 * h), 0.0, 1e-6);
    EXPECT_GT(m.d_max, dh(0.3, 0.5 * m.c_H));
    EXPECT_GT(m.d_max, dh(0.3, 2.0 * m.c_H));
    EXPECT_NEAR(find_cH(0.3, 1e-8, 400).c_H, m.c_H, 1e-6);
}

TEST(Catenoid, CurveShape)
{
    const DhCurve c = dh_curve(0.6, 200);
    ASSERT_EQ(c.lambda.size(), 200u);
    EXPECT_EQ(slope_sign_changes(c.d), 1);
    EXPECT_LT(c.d.back(), 0.1 * c.d_max);
}

TEST(Catenoid, PairResolution)
{
    const CatenoidMax m = find_cH(0.4);
    const CatenoidPair p = resolve_pair(0.4, 0.5 * m.d_max);
    EXPECT_LT(p.lambda1, m.c_H);
    EXPECT_GT(p.lambda2, m.c_H);
    EXPECT_NEAR(dh(0.4, p.lambda1), 0.5 * m.d_max, 1e-8);
    EXPECT_NEAR(dh(0.4, p.lambda2), 0.5 * m.d_max, 1e-8);
    try {
        resolve_pair(0.4, 1.01 * m.d_max);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::no_solution);
    }
}

TEST(Catenoid, RangeErrors)
{
    EXPECT_THROW(generating_curve(1.0, 0.5), Error);
    EXPECT_THROW(generating_curve(0.3, 0.0), Error);
    EXPECT_THROW(half_distance(-0.1, 0.5), Error);
    const CatenoidProfile p = generating_curve(0.3, 0.5);
    EXPECT_THROW(catenoid_mesh(p, 16, 16, 100.0), Error);
}

TEST(Catenoid, MeshIsSymmetricAndCurvatureConverges)
{
    const CatenoidProfile p = generating_curve(0.3, 0.7);
    const GridMesh m = catenoid_mesh(p, 32, 16, 3.0);
    for (int j = 0; j < 16; ++j) {
        EXPECT_DOUBLE_EQ(m.at(0, j).z, -m.at(31, j).z);
        EXPECT_NEAR(m.at(0, j).x, m.at(31, j).x, 1e-15);
    }
    const CurvatureError e64 = catenoid_curvature_error(p, 64, 3.0);
    const CurvatureError e128 = catenoid_curvature_error(p, 128, 3.0);
    EXPECT_LT(e128.max_rel, 0.02);
    EXPECT_GT(std::log2(e64.max_abs / e128.max_abs), 1.5);
}

TEST(Catenoid, SlicesAndSeparation)
{
    const CatenoidProfile p = generating_curve(0.5, find_cH(0.5).c_H);
    for (double t : {-1.0, 0.0, 0.8}) {
        const SliceRoots r = equidistant_slice(p, t);
        ASSERT_EQ(r.sigma.size(), 1u);
        EXPECT_GT(std::abs(r.slope[0]), 0.0);
    }
    const CatenoidProfile q = generating_curve(0.5, 1.2 * p.lambda());
    const double d = meridian_separation(p, q, 4.0);
    EXPECT_GT(d, 0.0);
    EXPECT_LE(d, q.lambda() - p.lambda() + 1e-12);
}
