#pragma once

// Exhaustion domains of the universal-cover slab:
//   Omega_n = { |theta| <= G_n(lambda, z), |z| <= Z_n(lambda) },
// with Z_n from the geodesic ball of radius R_n and G_n = G + 2 pi n from
// the translated wall catenoid, plus the boundary loops Gamma_n.

#include "cmclab/slab.hpp"

#include <vector>

namespace cmclab {

inline double default_radius(int n) { return 2.0 + 0.5 * n; }

// Translation along the y-axis carrying the z-axis to the geodesic with
// ideal endpoints (0, epsilon, +-sqrt(1 - epsilon^2)).
Isometry strip_translation(double epsilon);

struct ExitArc {
    double Z = 0.0;
    double dZ = 0.0; // d Z / d lambda
};

// Meridian arc length at which leaf lambda leaves the ball of radius R
// about the origin.
ExitArc exit_arc(const SlabChart& chart, double lambda, double R);

struct ZnTable {
    double R = 0.0;
    std::vector<double> lambda;
    std::vector<double> Z;
};
ZnTable build_Zn(const SlabChart& chart, double R);

// Level function of the translated wall catenoid and the angle G(lambda, z)
// at which each leaf circle crosses it.
class StripField {
public:
    StripField(const SlabChart& chart, double epsilon, int scan = 24);

    const SlabChart& chart() const { return *chart_; }
    double epsilon() const { return epsilon_; }
    const Isometry& translation() const { return phi_; }

    // Negative on the axis side of the translated catenoid.
    double level(const BallPoint& p) const;
    // Unique root in (0, pi) of the level along the leaf circle; throws a
    // construction error naming (lambda, z) when the crossing is not a
    // single transverse point.
    double G(double lambda, double z) const;

private:
    double level_fermi(const LeafJet& j, double theta) const;

    const SlabChart* chart_;
    double epsilon_;
    int scan_;
    Isometry phi_, phi_inv_;
};

struct StripTable {
    std::vector<double> lambda;
    std::vector<double> z;
    std::vector<double> G; // row-major, lambda-major
};
StripTable build_strips(const StripField& field, double z_extent, int n_lambda, int n_z);

// lambda(theta) = lambda1 + (lambda2 - lambda1) (2 atan(theta) + pi) / (2 pi)
struct SpiralProfile {
    double lambda1 = 0.0;
    double lambda2 = 0.0;

    double lambda(double theta) const;
    double theta(double lambda) const;
    double slope(double theta) const; // d lambda / d theta
};

class Omega {
public:
    Omega(const StripField& field, int n, double R);

    int n() const { return n_; }
    double R() const { return R_; }
    const StripField& field() const { return *field_; }
    const SlabChart& chart() const { return field_->chart(); }

    ExitArc Z(double lambda) const { return exit_arc(chart(), lambda, R_); }
    double G(double lambda, double z) const;
    bool contains(const SlabPoint& p, double slack = 0.0) const;

private:
    const StripField* field_;
    int n_;
    double R_;
};

struct WallOffsets {
    double minus = 0.0;
    double plus = 0.0;
};
// Solves lambda = spiral(+-G_n(lambda, Z_n(lambda))).
WallOffsets wall_offsets(const Omega& omega, const SpiralProfile& spiral);

// Stretched lambda nodes between the wall offsets: the mean of uniform and
// spiral-uniform spacing.
std::vector<double> lambda_nodes(const WallOffsets& w, const SpiralProfile& spiral, int n);

struct BoundaryCurve {
    int n = 0;
    WallOffsets walls;
    SpiralProfile spiral;
    std::vector<SlabPoint> alpha_plus;  // lambda = walls.plus, z from -Z to Z
    std::vector<SlabPoint> beta_plus;   // z = +Z, lambda from walls.plus down to walls.minus
    std::vector<SlabPoint> alpha_minus; // lambda = walls.minus, z from Z to -Z
    std::vector<SlabPoint> beta_minus;  // z = -Z, lambda from walls.minus up to walls.plus

    // Closed loop without repeated corner points.
    std::vector<SlabPoint> loop() const;
};

BoundaryCurve build_gamma(const Omega& omega, const SpiralProfile& spiral, int n_lambda, int n_z);

// Self-intersection test of the loop projected to the (lambda, z) plane,
// where the four arcs project injectively.
bool loop_is_simple(const BoundaryCurve& gamma);

// Ideal point of leaf lambda at slab angle theta, upper or lower circle.
Vec3 leaf_ideal_point(const SlabChart& chart, double lambda, double theta, bool upper);
Vec3 spiral_ideal_point(const SlabChart& chart, const SpiralProfile& spiral, double theta, bool upper);

// Spherical angle between unit vectors.
double sphere_angle(const Vec3& a, const Vec3& b);

// One-sided Hausdorff distance on the sphere from the radially projected
// beta arcs to the limit spiral (both halves).
double spiral_trace_distance(const BoundaryCurve& gamma, const SlabChart& chart);

struct ConvexityReport {
    double cap_min = 0.0;   // inward mean curvature of the ball caps
    double strip_min = 0.0; // inward mean curvature of the translated wall
};
ConvexityReport h_convexity(const Omega& omega, int samples = 12);

} // namespace cmclab
