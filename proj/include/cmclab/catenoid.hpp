#pragma once

// Spherical H-catenoids: surfaces of revolution about the ball z-axis with
// constant mean curvature H in [0, 1), symmetric under reflection in the
// (x, y)-plane, with neck circle at distance lambda from the axis.
//
// The meridian lives in the Fermi half-plane (x, r). With arc length sigma
// and tangent angle psi (measured from the axis direction) the profile obeys
//
//   x' = cos(psi) / cosh(r),   r' = sin(psi),
//   psi' = cosh(2r) cos(psi) / (sinh(r) cosh(r)) - 2H,
//
// and conserves E = sinh(r) cosh(r) cos(psi) - H sinh(r)^2.

#include "cmclab/grid_mesh.hpp"
#include "cmclab/hyperbolic.hpp"

#include <memory>
#include <span>
#include <vector>

namespace cmclab {

struct QuadratureOptions {
    double panel = 0.05;    // panel width in the graded variable
    int order = 10;         // Gauss-Legendre points per panel
    double tail_tol = 1e-10;
};

double neck_constant(double H, double lambda);

struct HalfDistance {
    double value = 0.0;
    double r_cut = 0.0;
    double tail_bound = 0.0;
};

// Asymptotic x of the meridian (half the distance between the planes
// spanning the two ideal circles).
HalfDistance half_distance(double H, double lambda, const QuadratureOptions& opts = {});

double dh(double H, double lambda, const QuadratureOptions& opts = {});

// x on the meridian at distance r >= lambda from the axis, by quadrature.
double meridian_x_quadrature(double H, double lambda, double r, const QuadratureOptions& opts = {});

struct MeridianSample {
    double x = 0.0;
    double r = 0.0;
    double dx = 0.0; // d/dsigma
    double dr = 0.0;
    double ddx = 0.0;
    double ddr = 0.0;
};

struct ProfileOptions {
    double sigma_max = 8.0;
    double table_step = 0.01;
    QuadratureOptions quad;
};

class CatenoidProfile {
public:
    CatenoidProfile(double H, double lambda, double tol, const ProfileOptions& opts);

    double H() const { return H_; }
    double lambda() const { return lambda_; }
    double E() const { return E_; }
    double d_half() const { return d_half_; }
    double sigma_max() const { return sigma_max_; }
    double table_step() const { return step_; }

    // Samples of the x >= 0 half at sigma_k = k * table_step.
    std::span<const double> x_samples() const { return x_; }
    std::span<const double> r_samples() const { return r_; }
    std::span<const double> psi_samples() const { return psi_; }

    // Meridian point at signed arc length sigma; negative sigma by reflection.
    MeridianSample at(double sigma) const;
    FermiPoint fermi(double sigma, double theta) const;

    double sigma_of_r(double r) const; // >= 0
    double x_of_r(double r) const;     // >= 0, quadrature beyond the table

    // max_k |E_k - E| / max(1, sinh(r_k) cosh(r_k)) over the table.
    double first_integral_drift() const;

private:
    double H_, lambda_, E_, d_half_;
    double sigma_max_, step_;
    QuadratureOptions quad_;
    std::vector<double> x_, r_, psi_;
    struct Interp;
    std::shared_ptr<const Interp> interp_;
};

CatenoidProfile generating_curve(double H, double lambda, double tol = 1e-10, const ProfileOptions& opts = {});

struct DhCurve {
    double H = 0.0;
    std::vector<double> lambda;
    std::vector<double> d;
    double c_H = 0.0;
    double d_max = 0.0;
};

// d_H at each lambda; the evaluations run in parallel, results in input order.
std::vector<double> dh_values(double H, std::span<const double> lambdas, const QuadratureOptions& opts = {});

struct CatenoidMax {
    double c_H = 0.0;
    double d_max = 0.0;
};

// Grid scan on log-spaced lambda in [lo, hi] followed by golden section.
CatenoidMax find_cH(double H, double tol = 1e-8, int scan_points = 200, double lo = 1e-2, double hi = 20.0,
                    const QuadratureOptions& opts = {});

DhCurve dh_curve(double H, int samples = 200, double lo = 1e-2, double hi = 20.0, double tol = 1e-8,
                 const QuadratureOptions& opts = {});

struct CatenoidPair {
    double lambda1 = 0.0; // unstable, below c_H
    double lambda2 = 0.0; // stable, above c_H
    double c_H = 0.0;
    double d_max = 0.0;
};

CatenoidPair resolve_pair(double H, double d, const QuadratureOptions& opts = {});

// Revolved meridian over sigma in [-z_cap, z_cap], n_u rows along the
// meridian and n_v periodic columns in theta.
GridMesh catenoid_mesh(const CatenoidProfile& profile, int n_u, int n_v, double z_cap);

// Discrete mean curvature of catenoid_mesh against H, with the normal
// oriented toward the axis, over vertices at least `margin` rows from the
// caps.
struct CurvatureError {
    double max_abs = 0.0;
    double max_rel = 0.0; // max_abs / H, or max_abs when H = 0
    double mean_H = 0.0;
    int samples = 0;
};
CurvatureError catenoid_curvature_error(const CatenoidProfile& profile, int n, double z_cap, int margin = 1);

// Intersection of the meridian with the equidistant surface at signed
// distance t from the plane x = 0: roots of cosh(r) sinh(x) = sinh(t).
struct SliceRoots {
    double t = 0.0;
    std::vector<double> sigma;
    std::vector<double> slope; // derivative of cosh(r) sinh(x) in sigma at each root
};
SliceRoots equidistant_slice(const CatenoidProfile& profile, double t, int samples = 4000);

// Minimum hyperbolic distance between two meridians (same theta) over
// sigma in [-cap, cap] on each.
double meridian_separation(const CatenoidProfile& a, const CatenoidProfile& b, double cap, int samples = 400);

} // namespace cmclab
