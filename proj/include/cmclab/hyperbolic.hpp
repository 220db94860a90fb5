#pragma once

// Hyperbolic 3-space in the Poincare ball model.
//
// Points are stored in ball coordinates. Isometries are carried as
// Lorentz matrices acting on the hyperboloid model, which makes composition
// and inversion exact matrix algebra; every public entry point takes and
// returns ball points.

#include <Eigen/Dense>

namespace cmclab {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d; // hyperboloid coordinates (t, x, y, z)
using Mat4 = Eigen::Matrix4d;

struct BallPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool ideal = false; // on the sphere at infinity; (x, y, z) is then a unit vector

    Vec3 vec() const { return {x, y, z}; }
    double norm() const { return vec().norm(); }
    static BallPoint from(const Vec3& v, bool ideal = false) { return {v.x(), v.y(), v.z(), ideal}; }
    static BallPoint ideal_point(const Vec3& direction);
};

// Fermi coordinates about a geodesic axis: signed arc length along the axis,
// distance to the axis, and rotation angle. The metric in these coordinates
// is cosh^2(r) dx^2 + dr^2 + sinh^2(r) dtheta^2.
struct FermiPoint {
    double x = 0.0;
    double r = 0.0;
    double theta = 0.0;
};

// A complete geodesic given by its ideal endpoints. Arc length runs from
// `from` (x -> -inf) to `to` (x -> +inf).
struct Geodesic {
    Vec3 from;
    Vec3 to;

    static Geodesic x_axis() { return {{-1, 0, 0}, {1, 0, 0}}; }
    static Geodesic y_axis() { return {{0, -1, 0}, {0, 1, 0}}; }
    static Geodesic z_axis() { return {{0, 0, -1}, {0, 0, 1}}; }
};

double lorentz_dot(const Vec4& a, const Vec4& b);

// Interior points map to the upper hyperboloid sheet, ideal points to the
// future null vector (1, p).
Vec4 to_hyperboloid(const BallPoint& p);
BallPoint from_hyperboloid(const Vec4& X);
BallPoint from_null(const Vec4& X);

double dist_H3(const BallPoint& p, const BallPoint& q);

// Conformal factor of the ball metric: ds = 2 |dp| / (1 - |p|^2).
double ball_conformal_factor(const BallPoint& p);

// Fermi chart about the ball z-axis, theta measured from +x toward +y.
Vec4 fermi_to_hyperboloid(const FermiPoint& f);
FermiPoint hyperboloid_to_fermi(const Vec4& X);
double normalize_angle(double theta); // into [0, 2 pi)

// Lorentz frame carrying the z-axis Fermi chart onto `axis`.
Mat4 axis_frame(const Geodesic& axis);

BallPoint fermi_to_ball(const FermiPoint& p, const Geodesic& axis = Geodesic::z_axis());
FermiPoint ball_to_fermi(const BallPoint& p, const Geodesic& axis = Geodesic::z_axis());

class Isometry {
public:
    enum class Kind { identity, rotation, translation, reflection, composite };

    Isometry() = default;

    static Isometry rotation(const Geodesic& axis, double angle);
    static Isometry translation(const Geodesic& axis, double distance);
    // Reflection in a coordinate plane; `normal_axis` is 0, 1 or 2 for the
    // planes x = 0, y = 0, z = 0.
    static Isometry reflection(int normal_axis);
    static Isometry from_matrix(const Mat4& m);

    BallPoint apply(const BallPoint& p) const;
    Vec4 apply(const Vec4& X) const { return m_ * X; }
    Isometry then(const Isometry& next) const; // next o this
    Isometry inverse() const;

    const Mat4& matrix() const { return m_; }
    Kind kind() const { return kind_; }

private:
    Isometry(const Mat4& m, Kind k) : m_(m), kind_(k) {}

    Mat4 m_ = Mat4::Identity();
    Kind kind_ = Kind::identity;
};

// Round circle on the sphere at infinity.
struct IdealCircle {
    Vec3 center;           // unit vector
    double angular_radius; // in (0, pi)
};

// Totally geodesic plane, stored as its unit spacelike Lorentz normal. The
// normal from an ideal circle points toward the cap the circle bounds
// around its center.
struct GeodesicPlane {
    Vec4 normal;

    static GeodesicPlane spanning(const IdealCircle& circle);
    double signed_distance(const BallPoint& p) const;
    IdealCircle ideal_boundary() const;
};

// Surface at constant signed distance t from a geodesic plane, positive t on
// the side the plane normal points to. Its mean curvature is tanh|t| with
// the mean curvature vector pointing back toward the plane.
class EquidistantSurface {
public:
    EquidistantSurface(const GeodesicPlane& plane, double t);

    const GeodesicPlane& plane() const { return plane_; }
    double offset() const { return t_; }
    double mean_curvature() const;

    // Fermi-type chart (u, v) on the plane pushed out by t.
    Vec4 at_hyperboloid(double u, double v) const;
    BallPoint at(double u, double v) const;
    IdealCircle ideal_boundary() const { return plane_.ideal_boundary(); }

    // Signed distance of p past the surface, positive beyond it (away from
    // the plane on the +normal side).
    double signed_excess(const BallPoint& p) const;

private:
    GeodesicPlane plane_;
    double t_;
    Vec4 foot_, e1_, e2_;
};

inline constexpr double kEquidistantCap = 12.0;

EquidistantSurface equidistant_surface(const IdealCircle& circle, double t, double t_cap = kEquidistantCap);

} // namespace cmclab
