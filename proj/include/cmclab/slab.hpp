#pragma once

// Region between two stable catenoids, foliated by the intermediate leaves,
// with slab coordinates (lambda, theta, z): leaf parameter, universal-cover
// angle and signed meridian arc length to the core circle.
//
// The slab angle is the Fermi angle about the z-axis shifted by a quarter
// turn, so theta = 0 is the half-plane through -y.

#include "cmclab/catenoid.hpp"
#include "cmclab/hyperbolic.hpp"

#include <numbers>
#include <vector>

namespace cmclab {

inline constexpr double kSlabThetaOffset = -std::numbers::pi / 2.0; // Fermi theta = slab theta + offset

struct SlabSpec {
    double H = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

struct SlabPoint {
    double lambda = 0.0;
    double theta = 0.0; // universal cover, unbounded
    double z = 0.0;
};

struct SlabOptions {
    int leaves = 257;
    double profile_tol = 1e-10;
    ProfileOptions profile;
};

// Position and first derivatives of the meridian point of leaf lambda at
// arc length z, in Fermi (x, r).
struct LeafJet {
    double x = 0.0, r = 0.0;
    double x_l = 0.0, r_l = 0.0; // d/dlambda at fixed z
    double x_z = 0.0, r_z = 0.0; // d/dz at fixed lambda
    double x_ll = 0.0, r_ll = 0.0;
    double x_lz = 0.0, r_lz = 0.0;
};

// Coefficients of the slab metric
//   g = [[a, 0, b], [0, s^2, 0], [b, 0, 1]]  in (lambda, theta, z),
// with D = a - b^2 and volume density s sqrt(D).
struct SlabMetric {
    double a = 0.0;
    double b = 0.0;
    double s = 0.0;
    double D = 0.0;
    // lambda-derivatives at fixed z
    double a_l = 0.0;
    double b_l = 0.0;
    double s_l = 0.0;
};

class SlabChart {
public:
    explicit SlabChart(const SlabSpec& spec, const SlabOptions& opts = {});

    const SlabSpec& spec() const { return spec_; }
    int leaf_count() const { return static_cast<int>(leaves_.size()); }
    double leaf_lambda(int k) const;
    const CatenoidProfile& leaf(int k) const { return leaves_[k]; }
    double z_max() const { return z_max_; }

    LeafJet jet(double lambda, double z) const;
    SlabMetric metric_coefficients(double lambda, double z) const;
    double d_half(double lambda) const; // interpolated across leaves

    Vec4 to_hyperboloid(const SlabPoint& p) const;
    BallPoint to_ball(const SlabPoint& p) const;
    // Inverse chart; theta is returned in (-pi, pi].
    SlabPoint from_ball(const BallPoint& p) const;

private:
    void check_lambda(double lambda) const;

    SlabSpec spec_;
    double h_;
    double z_max_;
    std::vector<CatenoidProfile> leaves_;
    std::vector<double> d_half_;
};

// Validates c_H <= lambda1 < lambda2 (precondition error otherwise).
void validate_slab(const SlabSpec& spec, double c_H);

BallPoint slab_to_ball(const SlabPoint& s, const SlabChart& chart);
SlabPoint ball_to_slab(const BallPoint& p, const SlabChart& chart);

// Deck/rotation translation T_theta0.
inline SlabPoint translate_theta(const SlabPoint& s, double theta0) { return {s.lambda, s.theta + theta0, s.z}; }

Eigen::Matrix3d metric_slab(const SlabPoint& s, const SlabChart& chart);

// Orbit of b under rotation about the axis, sampled at n points.
std::vector<BallPoint> killing_circle(const BallPoint& b, int samples = 256);
double polyline_length(const std::vector<BallPoint>& pts, bool closed);

} // namespace cmclab
