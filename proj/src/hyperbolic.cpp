#include "cmclab/hyperbolic.hpp"

#include "cmclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cmclab {

namespace {

Mat4 lorentz_inverse(const Mat4& m)
{
    const Eigen::Vector4d eta(-1, 1, 1, 1);
    return eta.asDiagonal() * m.transpose() * eta.asDiagonal();
}

Mat4 spatial_rotation(const Eigen::Matrix3d& r)
{
    Mat4 m = Mat4::Identity();
    m.block<3, 3>(1, 1) = r;
    return m;
}

// Boost moving the origin a hyperbolic distance d along coordinate axis k.
Mat4 coordinate_boost(int k, double d)
{
    Mat4 m = Mat4::Identity();
    m(0, 0) = std::cosh(d);
    m(k + 1, k + 1) = std::cosh(d);
    m(0, k + 1) = std::sinh(d);
    m(k + 1, 0) = std::sinh(d);
    return m;
}

Mat4 rotation_about_z(double angle)
{
    Eigen::Matrix3d r = Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    return spatial_rotation(r);
}

} // namespace

BallPoint BallPoint::ideal_point(const Vec3& direction)
{
    return from(direction.normalized(), true);
}

double lorentz_dot(const Vec4& a, const Vec4& b)
{
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

Vec4 to_hyperboloid(const BallPoint& p)
{
    const Vec3 v = p.vec();
    if (p.ideal) {
        const Vec3 u = v.normalized();
        return {1.0, u.x(), u.y(), u.z()};
    }
    const double n2 = v.squaredNorm();
    require(n2 < 1.0, ErrorCode::range, "ball point outside the open unit ball");
    const double den = 1.0 - n2;
    return {(1.0 + n2) / den, 2.0 * v.x() / den, 2.0 * v.y() / den, 2.0 * v.z() / den};
}

BallPoint from_hyperboloid(const Vec4& X)
{
    const double s = 1.0 + X[0];
    return {X[1] / s, X[2] / s, X[3] / s, false};
}

BallPoint from_null(const Vec4& X)
{
    return BallPoint::ideal_point(Vec3(X[1], X[2], X[3]) / X[0]);
}

double dist_H3(const BallPoint& p, const BallPoint& q)
{
    require(!p.ideal && !q.ideal, ErrorCode::ideal_point, "distance to an ideal point is infinite");
    const double dp = 1.0 - p.vec().squaredNorm();
    const double dq = 1.0 - q.vec().squaredNorm();
    require(dp > 0.0 && dq > 0.0, ErrorCode::range, "ball point outside the open unit ball");
    const double chord = (p.vec() - q.vec()).norm();
    return 2.0 * std::asinh(chord / std::sqrt(dp * dq));
}

double ball_conformal_factor(const BallPoint& p)
{
    return 2.0 / (1.0 - p.vec().squaredNorm());
}

double normalize_angle(double theta)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    if (t >= two_pi) t = 0.0;
    return t;
}

Vec4 fermi_to_hyperboloid(const FermiPoint& f)
{
    const double cr = std::cosh(f.r);
    const double sr = std::sinh(f.r);
    return {cr * std::cosh(f.x), sr * std::cos(f.theta), sr * std::sin(f.theta), cr * std::sinh(f.x)};
}

FermiPoint hyperboloid_to_fermi(const Vec4& X)
{
    const double sr = std::hypot(X[1], X[2]);
    const double cr = std::sqrt(1.0 + sr * sr);
    FermiPoint f;
    f.r = std::asinh(sr);
    f.x = std::asinh(X[3] / cr);
    f.theta = sr > 0.0 ? normalize_angle(std::atan2(X[2], X[1])) : 0.0;
    return f;
}

Mat4 axis_frame(const Geodesic& axis)
{
    require(axis.from.norm() > 0.0 && axis.to.norm() > 0.0, ErrorCode::invalid_axis,
            "axis endpoints must be nonzero directions");
    const Vec3 a = axis.from.normalized();
    const Vec3 b = axis.to.normalized();
    require((b - a).norm() > 1e-12, ErrorCode::invalid_axis, "axis endpoints coincide");

    const Vec3 e3 = (b - a).normalized();
    const Vec3 mid = a + b;
    Vec3 e1, e2;
    double t = 0.0;
    if (mid.norm() < 1e-14) {
        // Diameter: theta = 0 points along the cyclically next coordinate axis.
        int k = 0;
        e3.cwiseAbs().maxCoeff(&k);
        Vec3 c = Vec3::Zero();
        c[(k + 1) % 3] = 1.0;
        e1 = (c - c.dot(e3) * e3).normalized();
        e2 = e3.cross(e1);
    } else {
        e2 = mid.normalized();
        t = std::atanh(std::min(a.dot(e2), 1.0 - 1e-16));
        e1 = e2.cross(e3);
    }
    Eigen::Matrix3d r;
    r.col(0) = e1;
    r.col(1) = e2;
    r.col(2) = e3;
    return spatial_rotation(r) * coordinate_boost(1, t);
}

BallPoint fermi_to_ball(const FermiPoint& p, const Geodesic& axis)
{
    return from_hyperboloid(axis_frame(axis) * fermi_to_hyperboloid(p));
}

FermiPoint ball_to_fermi(const BallPoint& p, const Geodesic& axis)
{
    require(!p.ideal, ErrorCode::ideal_point, "Fermi coordinates undefined at an ideal point");
    return hyperboloid_to_fermi(lorentz_inverse(axis_frame(axis)) * to_hyperboloid(p));
}

Isometry Isometry::rotation(const Geodesic& axis, double angle)
{
    const Mat4 f = axis_frame(axis);
    return {f * rotation_about_z(angle) * lorentz_inverse(f), Kind::rotation};
}

Isometry Isometry::translation(const Geodesic& axis, double distance)
{
    const Mat4 f = axis_frame(axis);
    return {f * coordinate_boost(2, distance) * lorentz_inverse(f), Kind::translation};
}

Isometry Isometry::reflection(int normal_axis)
{
    require(normal_axis >= 0 && normal_axis < 3, ErrorCode::range, "reflection plane index must be 0, 1 or 2");
    Mat4 m = Mat4::Identity();
    m(normal_axis + 1, normal_axis + 1) = -1.0;
    return {m, Kind::reflection};
}

Isometry Isometry::from_matrix(const Mat4& m)
{
    return {m, Kind::composite};
}

BallPoint Isometry::apply(const BallPoint& p) const
{
    const Vec4 X = m_ * to_hyperboloid(p);
    return p.ideal ? from_null(X) : from_hyperboloid(X);
}

Isometry Isometry::then(const Isometry& next) const
{
    return {next.m_ * m_, Kind::composite};
}

Isometry Isometry::inverse() const
{
    return {lorentz_inverse(m_), kind_};
}

GeodesicPlane GeodesicPlane::spanning(const IdealCircle& circle)
{
    require(circle.angular_radius > 0.0 && circle.angular_radius < std::numbers::pi, ErrorCode::range,
            "ideal circle radius must lie in (0, pi)");
    const Vec3 c = circle.center.normalized();
    const double s = std::sin(circle.angular_radius);
    return {Vec4(std::cos(circle.angular_radius) / s, c.x() / s, c.y() / s, c.z() / s)};
}

double GeodesicPlane::signed_distance(const BallPoint& p) const
{
    require(!p.ideal, ErrorCode::ideal_point, "signed distance undefined at an ideal point");
    return std::asinh(lorentz_dot(to_hyperboloid(p), normal));
}

IdealCircle GeodesicPlane::ideal_boundary() const
{
    const Vec3 n(normal[1], normal[2], normal[3]);
    return {n.normalized(), std::acos(std::clamp(normal[0] / n.norm(), -1.0, 1.0))};
}

EquidistantSurface::EquidistantSurface(const GeodesicPlane& plane, double t) : plane_(plane), t_(t)
{
    const Vec4 origin(1, 0, 0, 0);
    const Vec4& n = plane_.normal;
    const Vec4 perp = origin - lorentz_dot(origin, n) * n;
    foot_ = perp / std::sqrt(-lorentz_dot(perp, perp));

    // Orthonormal spacelike frame of the plane's tangent space at the foot.
    Vec4 basis[2];
    int found = 0;
    for (int k = 1; k <= 3 && found < 2; ++k) {
        Vec4 v = Vec4::Zero();
        v[k] = 1.0;
        v += lorentz_dot(v, foot_) * foot_; // <foot, foot> = -1
        v -= lorentz_dot(v, n) * n;
        for (int j = 0; j < found; ++j) v -= lorentz_dot(v, basis[j]) * basis[j];
        const double len2 = lorentz_dot(v, v);
        if (len2 > 1e-8) basis[found++] = v / std::sqrt(len2);
    }
    e1_ = basis[0];
    e2_ = basis[1];
}

double EquidistantSurface::mean_curvature() const
{
    return std::tanh(std::abs(t_));
}

Vec4 EquidistantSurface::at_hyperboloid(double u, double v) const
{
    const Vec4 y = std::cosh(u) * std::cosh(v) * foot_ + std::sinh(u) * std::cosh(v) * e1_ + std::sinh(v) * e2_;
    return std::cosh(t_) * y + std::sinh(t_) * plane_.normal;
}

BallPoint EquidistantSurface::at(double u, double v) const
{
    return from_hyperboloid(at_hyperboloid(u, v));
}

double EquidistantSurface::signed_excess(const BallPoint& p) const
{
    return plane_.signed_distance(p) - t_;
}

EquidistantSurface equidistant_surface(const IdealCircle& circle, double t, double t_cap)
{
    require(std::abs(t) <= t_cap, ErrorCode::range, "equidistant offset exceeds the configured cap");
    return {GeodesicPlane::spanning(circle), t};
}

} // namespace cmclab
