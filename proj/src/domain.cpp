#include "cmclab/domain.hpp"

#include "cmclab/errors.hpp"
#include "cmclab/grid_mesh.hpp"
#include "cmclab/numerics.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cmclab {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

Isometry strip_translation(double epsilon)
{
    require(epsilon > -1.0 && epsilon < 1.0, ErrorCode::range, fmt::format("epsilon = {} outside (-1, 1)", epsilon));
    return Isometry::translation(Geodesic::y_axis(), std::atanh(epsilon));
}

ExitArc exit_arc(const SlabChart& chart, double lambda, double R)
{
    const double target = std::cosh(R);
    auto F = [&](double z) {
        const LeafJet j = chart.jet(lambda, z);
        return std::cosh(j.r) * std::cosh(j.x) - target;
    };
    if (!(F(0.0) < 0.0))
        fail(ErrorCode::precondition, fmt::format("ball radius R = {} does not reach past the neck of leaf lambda = {:.17g}", R, lambda));
    if (!(F(chart.z_max()) > 0.0))
        fail(ErrorCode::precondition,
             fmt::format("leaf lambda = {:.17g} does not leave the ball of radius {} within the profile table", lambda, R));
    ExitArc out;
    out.Z = find_root(F, 0.0, chart.z_max(), 1e-15);
    const LeafJet j = chart.jet(lambda, out.Z);
    const double ch = std::cosh(j.x), sh = std::sinh(j.x);
    const double cr = std::cosh(j.r), sr = std::sinh(j.r);
    const double F_l = sr * j.r_l * ch + cr * sh * j.x_l;
    const double F_z = sr * j.r_z * ch + cr * sh * j.x_z;
    out.dZ = -F_l / F_z;
    return out;
}

ZnTable build_Zn(const SlabChart& chart, double R)
{
    ZnTable t;
    t.R = R;
    t.lambda.resize(static_cast<size_t>(chart.leaf_count()));
    t.Z.resize(t.lambda.size());
    for (int k = 0; k < chart.leaf_count(); ++k) {
        t.lambda[k] = chart.leaf_lambda(k);
        t.Z[k] = exit_arc(chart, t.lambda[k], R).Z;
    }
    return t;
}

StripField::StripField(const SlabChart& chart, double epsilon, int scan)
    : chart_(&chart), epsilon_(epsilon), scan_(scan), phi_(strip_translation(epsilon)), phi_inv_(phi_.inverse())
{
    require(epsilon < 0.0, ErrorCode::range, fmt::format("strip translation epsilon = {} must be negative", epsilon));
    require(scan >= 4, ErrorCode::range, "strip scan needs at least four samples");
}

double StripField::level_fermi(const LeafJet& j, double theta) const
{
    const Vec4 X = phi_inv_.apply(fermi_to_hyperboloid({j.x, j.r, theta + kSlabThetaOffset}));
    const FermiPoint f = hyperboloid_to_fermi(X);
    const CatenoidProfile& wall = chart_->leaf(0);
    if (f.r < wall.lambda()) return -std::abs(f.x) - (wall.lambda() - f.r);
    return wall.x_of_r(f.r) - std::abs(f.x);
}

double StripField::level(const BallPoint& p) const
{
    const FermiPoint f = hyperboloid_to_fermi(phi_inv_.apply(to_hyperboloid(p)));
    const CatenoidProfile& wall = chart_->leaf(0);
    if (f.r < wall.lambda()) return -std::abs(f.x) - (wall.lambda() - f.r);
    return wall.x_of_r(f.r) - std::abs(f.x);
}

double StripField::G(double lambda, double z) const
{
    const LeafJet j = chart_->jet(lambda, z);
    auto F = [&](double th) { return level_fermi(j, th); };
    auto where = [&] { return fmt::format("(lambda, z) = ({:.17g}, {:.17g})", lambda, z); };
    double prev = F(0.0);
    if (!(prev < 0.0)) fail(ErrorCode::construction, "translated wall does not enclose theta = 0 at " + where());
    int changes = 0;
    double lo = 0.0, hi = kPi;
    for (int k = 1; k <= scan_; ++k) {
        const double th = kPi * k / scan_;
        const double cur = F(th);
        if ((prev < 0.0) != (cur < 0.0)) {
            ++changes;
            lo = kPi * (k - 1) / scan_;
            hi = th;
        }
        prev = cur;
    }
    if (!(prev > 0.0) || changes != 1)
        fail(ErrorCode::construction, fmt::format("leaf circle meets the translated wall in {} points at {}", changes, where()));
    const double g = find_root(F, lo, hi, 1e-15);
    const double d = 1e-6;
    const double slope = (F(g + d) - F(g - d)) / (2.0 * d);
    if (!(slope > 1e-10)) fail(ErrorCode::construction, "tangential crossing of the translated wall at " + where());
    return g;
}

StripTable build_strips(const StripField& field, double z_extent, int n_lambda, int n_z)
{
    require(n_lambda >= 2 && n_z >= 2, ErrorCode::range, "strip table needs at least 2 x 2 nodes");
    const SlabSpec& s = field.chart().spec();
    StripTable t;
    t.lambda = linspace(s.lambda1, s.lambda2, n_lambda);
    t.z.resize(static_cast<size_t>(n_z));
    for (int j = 0; j < n_z; ++j) t.z[j] = z_extent * (2.0 * j - (n_z - 1)) / (n_z - 1);
    t.G.resize(static_cast<size_t>(n_lambda) * n_z);
    std::vector<std::string> errors(t.G.size());
    const long total = static_cast<long>(t.G.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < total; ++k) {
        try {
            t.G[k] = field.G(t.lambda[k / n_z], t.z[k % n_z]);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) fail(ErrorCode::construction, e);
    return t;
}

double SpiralProfile::lambda(double theta) const
{
    return lambda1 + (lambda2 - lambda1) * (2.0 * std::atan(theta) + kPi) / (2.0 * kPi);
}

double SpiralProfile::theta(double lambda) const
{
    require(lambda > lambda1 && lambda < lambda2, ErrorCode::range,
            fmt::format("lambda = {:.17g} outside the open slab ({:.17g}, {:.17g})", lambda, lambda1, lambda2));
    return std::tan(kPi * (lambda - lambda1) / (lambda2 - lambda1) - 0.5 * kPi);
}

double SpiralProfile::slope(double theta) const
{
    return (lambda2 - lambda1) / (kPi * (1.0 + theta * theta));
}

Omega::Omega(const StripField& field, int n, double R) : field_(&field), n_(n), R_(R)
{
    require(n >= 0, ErrorCode::range, "domain index must be non-negative");
    const SlabSpec& s = field.chart().spec();
    // Z_n must exist on every leaf of the slab.
    exit_arc(field.chart(), s.lambda1, R);
    exit_arc(field.chart(), s.lambda2, R);
}

double Omega::G(double lambda, double z) const { return field_->G(lambda, z) + 2.0 * kPi * n_; }

bool Omega::contains(const SlabPoint& p, double slack) const
{
    const SlabSpec& s = chart().spec();
    if (p.lambda < s.lambda1 || p.lambda > s.lambda2) return false;
    if (std::abs(p.z) > Z(p.lambda).Z + slack) return false;
    return std::abs(p.theta) <= G(p.lambda, p.z) + slack;
}

WallOffsets wall_offsets(const Omega& omega, const SpiralProfile& spiral)
{
    const SlabSpec& s = omega.chart().spec();
    auto edge = [&](double l, double sign) {
        const double z = omega.Z(l).Z;
        return l - spiral.lambda(sign * omega.G(l, z));
    };
    WallOffsets w;
    w.plus = find_root([&](double l) { return edge(l, 1.0); }, s.lambda1, s.lambda2, 1e-15);
    w.minus = find_root([&](double l) { return edge(l, -1.0); }, s.lambda1, s.lambda2, 1e-15);
    require(s.lambda1 < w.minus && w.minus < w.plus && w.plus < s.lambda2, ErrorCode::range,
            fmt::format("wall offsets {:.17g}, {:.17g} not ordered inside the slab", w.minus, w.plus));
    return w;
}

std::vector<double> lambda_nodes(const WallOffsets& w, const SpiralProfile& spiral, int n)
{
    require(n >= 3, ErrorCode::range, "need at least three lambda nodes");
    const double ta = spiral.theta(w.minus), tb = spiral.theta(w.plus);
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / (n - 1);
        out[i] = 0.5 * ((w.minus + f * (w.plus - w.minus)) + spiral.lambda(ta + f * (tb - ta)));
    }
    out.front() = w.minus;
    out.back() = w.plus;
    return out;
}

std::vector<SlabPoint> BoundaryCurve::loop() const
{
    std::vector<SlabPoint> out(alpha_plus.begin(), alpha_plus.end());
    out.insert(out.end(), beta_plus.begin() + 1, beta_plus.end());
    out.insert(out.end(), alpha_minus.begin() + 1, alpha_minus.end());
    out.insert(out.end(), beta_minus.begin() + 1, beta_minus.end() - 1);
    return out;
}

BoundaryCurve build_gamma(const Omega& omega, const SpiralProfile& spiral, int n_lambda, int n_z)
{
    require(n_z >= 3, ErrorCode::range, "need at least three z nodes");
    BoundaryCurve g;
    g.n = omega.n();
    g.spiral = spiral;
    g.walls = wall_offsets(omega, spiral);
    const std::vector<double> lam = lambda_nodes(g.walls, spiral, n_lambda);

    auto alpha = [&](double l, double sign) {
        const double Z = omega.Z(l).Z;
        std::vector<SlabPoint> a(static_cast<size_t>(n_z));
        for (int j = 0; j < n_z; ++j) {
            const double z = Z * (2.0 * j - (n_z - 1)) / (n_z - 1);
            a[j] = {l, sign * omega.G(l, z), z};
        }
        return a;
    };
    g.alpha_plus = alpha(g.walls.plus, 1.0);
    g.alpha_minus = alpha(g.walls.minus, -1.0);
    std::reverse(g.alpha_minus.begin(), g.alpha_minus.end());

    const int n = n_lambda;
    g.beta_plus.resize(static_cast<size_t>(n));
    g.beta_minus.resize(static_cast<size_t>(n));
    for (int i = 1; i + 1 < n; ++i) {
        const double Z = omega.Z(lam[i]).Z;
        const double th = spiral.theta(lam[i]);
        g.beta_plus[n - 1 - i] = {lam[i], th, Z};
        g.beta_minus[i] = {lam[i], th, -Z};
    }
    g.beta_plus.front() = g.alpha_plus.back();
    g.beta_plus.back() = g.alpha_minus.front();
    g.beta_minus.front() = g.alpha_minus.back();
    g.beta_minus.back() = g.alpha_plus.front();

    if (!loop_is_simple(g)) fail(ErrorCode::construction, fmt::format("boundary loop for n = {} self-intersects", g.n));
    return g;
}

bool loop_is_simple(const BoundaryCurve& gamma)
{
    const std::vector<SlabPoint> p = gamma.loop();
    const size_t n = p.size();
    auto orient = [](const SlabPoint& a, const SlabPoint& b, const SlabPoint& c) {
        const double v = (b.lambda - a.lambda) * (c.z - a.z) - (b.z - a.z) * (c.lambda - a.lambda);
        return (v > 0) - (v < 0);
    };
    for (size_t i = 0; i < n; ++i) {
        const SlabPoint& a = p[i];
        const SlabPoint& b = p[(i + 1) % n];
        for (size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j + 1 == n) continue; // adjacent through the closing edge
            const SlabPoint& c = p[j];
            const SlabPoint& d = p[(j + 1) % n];
            const int o1 = orient(a, b, c), o2 = orient(a, b, d);
            const int o3 = orient(c, d, a), o4 = orient(c, d, b);
            if (o1 * o2 < 0 && o3 * o4 < 0) return false;
        }
    }
    return true;
}

Vec3 leaf_ideal_point(const SlabChart& chart, double lambda, double theta, bool upper)
{
    const double d = chart.d_half(lambda);
    const double phi = theta + kSlabThetaOffset;
    const double c = 1.0 / std::cosh(d);
    return {c * std::cos(phi), c * std::sin(phi), (upper ? 1.0 : -1.0) * std::tanh(d)};
}

Vec3 spiral_ideal_point(const SlabChart& chart, const SpiralProfile& spiral, double theta, bool upper)
{
    return leaf_ideal_point(chart, spiral.lambda(theta), theta, upper);
}

double sphere_angle(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

double spiral_trace_distance(const BoundaryCurve& gamma, const SlabChart& chart)
{
    double worst = 0.0;
    auto visit = [&](const std::vector<SlabPoint>& arc, bool upper) {
        for (const SlabPoint& s : arc) {
            const Vec3 radial = chart.to_ball(s).vec().normalized();
            worst = std::max(worst, sphere_angle(radial, leaf_ideal_point(chart, s.lambda, s.theta, upper)));
        }
    };
    visit(gamma.beta_plus, true);
    visit(gamma.beta_minus, false);
    return worst;
}

ConvexityReport h_convexity(const Omega& omega, int samples)
{
    ConvexityReport rep{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const double R = omega.R();
    const double h = 1e-3;
    // geodesic sphere of radius R, oriented toward its center
    auto sphere = [R](double u, double v) {
        return Vec4{std::cosh(R), std::sinh(R) * std::sin(u) * std::cos(v), std::sinh(R) * std::sin(u) * std::sin(v),
                    std::sinh(R) * std::cos(u)};
    };
    for (int k = 0; k < samples; ++k) {
        const double u = 0.2 + 2.7 * k / std::max(1, samples - 1);
        const double v = 0.5 * k;
        const CurvatureSample c = chart_mean_curvature(sphere, u, v, h);
        const Vec4 inward = Vec4(1, 0, 0, 0) + lorentz_dot(Vec4(1, 0, 0, 0), c.position) * c.position;
        const double sgn = lorentz_dot(c.normal, inward) > 0 ? 1.0 : -1.0;
        rep.cap_min = std::min(rep.cap_min, sgn * c.mean_curvature);
    }
    // translated wall catenoid, oriented toward its axis
    const CatenoidProfile& wall = omega.chart().leaf(0);
    const Isometry& phi = omega.field().translation();
    const double zc = std::min(omega.Z(omega.chart().spec().lambda1).Z, wall.sigma_max() - 2 * h);
    auto surf = [&](double s, double th) { return phi.apply(fermi_to_hyperboloid(wall.fermi(s, th))); };
    for (int k = 0; k < samples; ++k) {
        const double s = -zc + 2.0 * zc * k / std::max(1, samples - 1);
        const double th = 2.0 * std::numbers::pi * k / samples;
        const CurvatureSample c = chart_mean_curvature(surf, s, th, h);
        const MeridianSample m = wall.at(s);
        const Vec4 toward_axis = phi.apply(fermi_to_hyperboloid({m.x, m.r - h, th})) - phi.apply(fermi_to_hyperboloid({m.x, m.r + h, th}));
        const double sgn = lorentz_dot(c.normal, toward_axis) > 0 ? 1.0 : -1.0;
        rep.strip_min = std::min(rep.strip_min, sgn * c.mean_curvature);
    }
    return rep;
}

} // namespace cmclab
