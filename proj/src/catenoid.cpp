#include "cmclab/catenoid.hpp"

#include "cmclab/errors.hpp"
#include "cmclab/numerics.hpp"

#include <boost/math/interpolators/quintic_hermite.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace cmclab {

namespace {

void check_params(double H, double lambda)
{
    require(H >= 0.0 && H < 1.0, ErrorCode::range, fmt::format("H = {} outside [0, 1)", H));
    require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::range, fmt::format("lambda = {} must be positive", lambda));
}

// dx/ds along the meridian with r = lambda + s^2; smooth through the neck.
double x_rate_s(double H, double lambda, double E, double s)
{
    const double y = s * s;
    const double g = lambda + y;
    const double sh = std::sinh(g), ch = std::cosh(g);
    const double K = E + H * sh * sh;
    const double S = sh * ch;
    const double D = std::cosh(g + lambda) - H * std::sinh(g + lambda);
    const double sinhc = y < 1e-8 ? 1.0 + y * y / 6.0 : std::sinh(y) / y;
    return 2.0 * K / (ch * std::sqrt(sinhc * D * (S + K)));
}

double grading(double lambda) { return std::min(1.0, std::sqrt(lambda)); }

// Integral of dx/ds for s in [0, s_end] on the graded variable s = a sinh(tau).
double x_integral(double H, double lambda, double E, double s_end, const QuadratureOptions& q)
{
    const double a = grading(lambda);
    const double tau_end = std::asinh(s_end / a);
    return integrate_panels(
        [&](double tau) {
            const double s = a * std::sinh(tau);
            return x_rate_s(H, lambda, E, s) * a * std::cosh(tau);
        },
        0.0, tau_end, q.panel, q.order);
}

struct State {
    double x, r, psi;
};

State rhs(double H, const State& y)
{
    const double sh = std::sinh(y.r), ch = std::cosh(y.r);
    const double c = std::cos(y.psi);
    return {c / ch, std::sin(y.psi), std::cosh(2.0 * y.r) * c / (sh * ch) - 2.0 * H};
}

State rk4_step(double H, const State& y, double h)
{
    auto axpy = [](const State& a, double t, const State& k) {
        return State{a.x + t * k.x, a.r + t * k.r, a.psi + t * k.psi};
    };
    const State k1 = rhs(H, y);
    const State k2 = rhs(H, axpy(y, 0.5 * h, k1));
    const State k3 = rhs(H, axpy(y, 0.5 * h, k2));
    const State k4 = rhs(H, axpy(y, h, k3));
    return {y.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x), y.r + h / 6.0 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r),
            y.psi + h / 6.0 * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi)};
}

} // namespace

double neck_constant(double H, double lambda)
{
    return std::sinh(lambda) * (std::cosh(lambda) - H * std::sinh(lambda));
}

HalfDistance half_distance(double H, double lambda, const QuadratureOptions& q)
{
    check_params(H, lambda);
    const double E = neck_constant(H, lambda);
    // dx/dr <= Q / (sqrt(1 - Q^2) cosh r) beyond R, with Q = E / S(R) + H.
    auto tail = [&](double R) {
        const double Q = E / (std::sinh(R) * std::cosh(R)) + H;
        if (Q >= 1.0) return std::numeric_limits<double>::infinity();
        return 2.0 * Q * std::exp(-R) / std::sqrt(1.0 - Q * Q);
    };
    double R = lambda + 1.0;
    while (tail(R) >= q.tail_tol) {
        R += 0.5;
        if (R > lambda + 700.0)
            fail(ErrorCode::numeric, fmt::format("tail bound did not reach {:.1e} for H = {}, lambda = {}", q.tail_tol, H, lambda));
    }
    HalfDistance out;
    out.r_cut = R;
    out.tail_bound = tail(R);
    out.value = x_integral(H, lambda, E, std::sqrt(R - lambda), q);
    require(std::isfinite(out.value) && out.value > 0.0, ErrorCode::numeric,
            fmt::format("half-distance quadrature failed for H = {}, lambda = {}", H, lambda));
    return out;
}

double dh(double H, double lambda, const QuadratureOptions& q) { return 2.0 * half_distance(H, lambda, q).value; }

double meridian_x_quadrature(double H, double lambda, double r, const QuadratureOptions& q)
{
    check_params(H, lambda);
    require(r >= lambda, ErrorCode::range, "meridian radius below the neck");
    return x_integral(H, lambda, neck_constant(H, lambda), std::sqrt(r - lambda), q);
}

struct CatenoidProfile::Interp {
    boost::math::interpolators::cardinal_quintic_hermite<std::vector<double>> x, r;
};

CatenoidProfile::CatenoidProfile(double H, double lambda, double tol, const ProfileOptions& opts)
    : H_(H), lambda_(lambda), E_(neck_constant(H, lambda)), sigma_max_(opts.sigma_max), step_(opts.table_step),
      quad_(opts.quad)
{
    check_params(H, lambda);
    require(tol > 0.0, ErrorCode::range, "tolerance must be positive");
    require(opts.sigma_max > 0.0 && opts.table_step > 0.0, ErrorCode::range, "invalid profile table extent");
    d_half_ = half_distance(H, lambda, quad_).value;

    const int n = static_cast<int>(std::ceil(sigma_max_ / step_ - 1e-9));
    sigma_max_ = n * step_;
    const double h_target = std::min({step_, 0.02 * std::min(lambda, 1.0), 0.5 * std::pow(tol, 0.25)});
    const int sub = std::max(1, static_cast<int>(std::ceil(step_ / h_target)));
    const double h = step_ / sub;

    std::vector<double> dx(n + 1), dr(n + 1), ddx(n + 1), ddr(n + 1);
    x_.resize(n + 1);
    r_.resize(n + 1);
    psi_.resize(n + 1);
    State y{0.0, lambda, 0.0};
    for (int k = 0; k <= n; ++k) {
        require(std::isfinite(y.r) && std::isfinite(y.psi), ErrorCode::numeric,
                fmt::format("profile integration diverged at sigma = {}", k * step_));
        x_[k] = y.x;
        r_[k] = y.r;
        psi_[k] = y.psi;
        const State f = rhs(H, y);
        const double ch = std::cosh(y.r), sh = std::sinh(y.r);
        const double s = std::sin(y.psi), c = std::cos(y.psi);
        dx[k] = f.x;
        dr[k] = f.r;
        ddr[k] = c * f.psi;
        ddx[k] = -(s * f.psi * ch + c * sh * s) / (ch * ch);
        if (k == n) break;
        for (int j = 0; j < sub; ++j) y = rk4_step(H, y, h);
    }
    for (int k = 1; k <= n; ++k)
        require(r_[k] > r_[k - 1] && x_[k] > x_[k - 1], ErrorCode::numeric,
                fmt::format("profile not monotone at sigma = {}", k * step_));

    auto xs = x_, rs = r_;
    interp_ = std::make_shared<const Interp>(
        Interp{{std::move(xs), std::move(dx), std::move(ddx), 0.0, step_},
               {std::move(rs), std::move(dr), std::move(ddr), 0.0, step_}});
}

MeridianSample CatenoidProfile::at(double sigma) const
{
    const double a = std::abs(sigma);
    require(a <= sigma_max_ * (1.0 + 1e-12), ErrorCode::range,
            fmt::format("arc length {} beyond the profile table ({})", sigma, sigma_max_));
    const double t = std::min(a, sigma_max_);
    MeridianSample m;
    m.x = interp_->x(t);
    m.r = interp_->r(t);
    m.dx = interp_->x.prime(t);
    m.dr = interp_->r.prime(t);
    m.ddx = interp_->x.double_prime(t);
    m.ddr = interp_->r.double_prime(t);
    if (sigma < 0.0) {
        // x odd, r even in sigma
        m.x = -m.x;
        m.dr = -m.dr;
        m.ddx = -m.ddx;
    }
    return m;
}

FermiPoint CatenoidProfile::fermi(double sigma, double theta) const
{
    const MeridianSample m = at(sigma);
    return {m.x, m.r, theta};
}

double CatenoidProfile::sigma_of_r(double r) const
{
    require(r >= lambda_, ErrorCode::range, "radius below the neck");
    if (r == lambda_) return 0.0;
    require(r <= r_.back(), ErrorCode::range, "radius beyond the profile table");
    const auto it = std::lower_bound(r_.begin(), r_.end(), r);
    const int k = static_cast<int>(it - r_.begin());
    const double lo = (k - 1) * step_, hi = k * step_;
    return find_root([&](double s) { return interp_->r(s) - r; }, lo, hi, 1e-15);
}

double CatenoidProfile::x_of_r(double r) const
{
    if (r <= r_.back()) return interp_->x(sigma_of_r(r));
    return meridian_x_quadrature(H_, lambda_, r, quad_);
}

double CatenoidProfile::first_integral_drift() const
{
    double worst = 0.0;
    for (size_t k = 0; k < r_.size(); ++k) {
        const double S = std::sinh(r_[k]) * std::cosh(r_[k]);
        const double Ek = S * std::cos(psi_[k]) - H_ * std::sinh(r_[k]) * std::sinh(r_[k]);
        worst = std::max(worst, std::abs(Ek - E_) / std::max(1.0, S));
    }
    return worst;
}

CatenoidProfile generating_curve(double H, double lambda, double tol, const ProfileOptions& opts)
{
    return CatenoidProfile(H, lambda, tol, opts);
}

std::vector<double> dh_values(double H, std::span<const double> lambdas, const QuadratureOptions& q)
{
    std::vector<double> out(lambdas.size());
    std::vector<std::string> errors(lambdas.size());
    const long n = static_cast<long>(lambdas.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        try {
            out[i] = dh(H, lambdas[i], q);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) fail(ErrorCode::numeric, fmt::format("d_H at lambda = {}: {}", lambdas[i], errors[i]));
    return out;
}

namespace {

CatenoidMax refine_max(double H, std::span<const double> lam, std::span<const double> d, double tol,
                       const QuadratureOptions& q)
{
    const auto it = std::max_element(d.begin(), d.end());
    const size_t i = static_cast<size_t>(it - d.begin());
    if (i == 0 || i + 1 == d.size())
        fail(ErrorCode::numeric, fmt::format("d_H maximum not bracketed by the scan (H = {}, argmax lambda = {})", H, lam[i]));
    const Extremum e = golden_section_max([&](double l) { return dh(H, l, q); }, lam[i - 1], lam[i + 1], tol);
    return {e.x, e.f};
}

} // namespace

CatenoidMax find_cH(double H, double tol, int scan_points, double lo, double hi, const QuadratureOptions& q)
{
    require(scan_points >= 3, ErrorCode::range, "scan needs at least three points");
    const std::vector<double> lam = logspace(lo, hi, scan_points);
    const std::vector<double> d = dh_values(H, lam, q);
    return refine_max(H, lam, d, tol, q);
}

DhCurve dh_curve(double H, int samples, double lo, double hi, double tol, const QuadratureOptions& q)
{
    require(samples >= 3, ErrorCode::range, "scan needs at least three points");
    DhCurve c;
    c.H = H;
    c.lambda = logspace(lo, hi, samples);
    c.d = dh_values(H, c.lambda, q);
    const CatenoidMax m = refine_max(H, c.lambda, c.d, tol, q);
    c.c_H = m.c_H;
    c.d_max = m.d_max;
    return c;
}

CatenoidPair resolve_pair(double H, double d, const QuadratureOptions& q)
{
    require(d > 0.0, ErrorCode::range, fmt::format("distance {} must be positive", d));
    const CatenoidMax m = find_cH(H, 1e-9, 200, 1e-2, 20.0, q);
    if (d >= m.d_max)
        fail(ErrorCode::no_solution, fmt::format("d = {:.17g} is not below d_max = {:.17g}", d, m.d_max));
    auto f = [&](double l) { return dh(H, l, q) - d; };

    double lo = m.c_H;
    while (f(lo) > 0.0) {
        lo *= 0.5;
        if (lo < 1e-10)
            fail(ErrorCode::no_solution, fmt::format("no unstable catenoid with d = {:.17g} (small-lambda limit stays above)", d));
    }
    double hi = m.c_H;
    while (f(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e3) fail(ErrorCode::no_solution, "no stable catenoid found below lambda = 1000");
    }
    CatenoidPair p;
    p.c_H = m.c_H;
    p.d_max = m.d_max;
    p.lambda1 = find_root(f, lo, std::min(2.0 * lo, m.c_H), 1e-15);
    p.lambda2 = find_root(f, std::max(0.5 * hi, m.c_H), hi, 1e-15);
    return p;
}

GridMesh catenoid_mesh(const CatenoidProfile& profile, int n_u, int n_v, double z_cap)
{
    require(n_u >= 4 && n_v >= 4, ErrorCode::range, "catenoid mesh resolution must be at least 4 x 4");
    require(z_cap > 0.0 && z_cap <= profile.sigma_max(), ErrorCode::range,
            fmt::format("z_cap = {} outside (0, {}]", z_cap, profile.sigma_max()));
    GridMesh mesh;
    mesh.nu = n_u;
    mesh.nv = n_v;
    mesh.periodic_v = true;
    mesh.vertices.resize(static_cast<size_t>(n_u) * n_v);
    for (int i = 0; i < n_u; ++i) {
        // exact negation symmetry of the sigma nodes
        const double sigma = z_cap * (2.0 * i - (n_u - 1)) / (n_u - 1);
        const MeridianSample m = profile.at(sigma);
        for (int j = 0; j < n_v; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / n_v;
            mesh.at(i, j) = from_hyperboloid(fermi_to_hyperboloid({m.x, m.r, theta}));
        }
    }
    return mesh;
}

CurvatureError catenoid_curvature_error(const CatenoidProfile& profile, int n, double z_cap, int margin)
{
    const GridMesh mesh = catenoid_mesh(profile, n, n, z_cap);
    CurvatureError e;
    double sum = 0.0;
    for (const auto& c : grid_mean_curvature(mesh, margin)) {
        // outward radial direction of the Fermi chart about the axis
        const FermiPoint f = hyperboloid_to_fermi(c.position);
        const Vec4 dr = fermi_to_hyperboloid({f.x, f.r + 1e-6, f.theta}) - fermi_to_hyperboloid({f.x, f.r - 1e-6, f.theta});
        const double Hc = lorentz_dot(c.normal, dr) < 0.0 ? c.mean_curvature : -c.mean_curvature;
        e.max_abs = std::max(e.max_abs, std::abs(Hc - profile.H()));
        sum += Hc;
        ++e.samples;
    }
    e.mean_H = e.samples ? sum / e.samples : 0.0;
    e.max_rel = profile.H() > 0.0 ? e.max_abs / profile.H() : e.max_abs;
    return e;
}

SliceRoots equidistant_slice(const CatenoidProfile& profile, double t, int samples)
{
    SliceRoots out;
    out.t = t;
    const double target = std::sinh(t);
    auto f = [&](double s) {
        const MeridianSample m = profile.at(s);
        return std::cosh(m.r) * std::sinh(m.x) - target;
    };
    auto fprime = [&](double s) {
        const MeridianSample m = profile.at(s);
        return std::sinh(m.r) * m.dr * std::sinh(m.x) + std::cosh(m.r) * std::cosh(m.x) * m.dx;
    };
    const std::vector<double> grid = linspace(-profile.sigma_max(), profile.sigma_max(), samples);
    double prev = f(grid[0]);
    for (size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        if (cur == 0.0 || prev * cur < 0.0) {
            const double root = cur == 0.0 ? grid[i] : find_root(f, grid[i - 1], grid[i], 1e-15);
            out.sigma.push_back(root);
            out.slope.push_back(fprime(root));
        }
        prev = cur;
    }
    return out;
}

double meridian_separation(const CatenoidProfile& a, const CatenoidProfile& b, double cap, int samples)
{
    const std::vector<double> s = linspace(-cap, cap, samples);
    std::vector<BallPoint> pa, pb;
    for (double v : s) {
        pa.push_back(fermi_to_ball(a.fermi(v, 0.0)));
        pb.push_back(fermi_to_ball(b.fermi(v, 0.0)));
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pa)
        for (const auto& q : pb) best = std::min(best, dist_H3(p, q));
    return best;
}

} // namespace cmclab
