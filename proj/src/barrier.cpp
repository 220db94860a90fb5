#include "cmclab/barrier.hpp"

#include "cmclab/errors.hpp"
#include "cmclab/numerics.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cmclab {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 spiral_tangent(const SlabChart& chart, const SpiralProfile& spiral, double theta, bool upper)
{
    const double h = 1e-6;
    const Vec3 d = spiral_ideal_point(chart, spiral, theta + h, upper) - spiral_ideal_point(chart, spiral, theta - h, upper);
    return d.normalized();
}

// Polar angle of the ideal circle of leaf lambda.
double circle_colatitude(const SlabChart& chart, double lambda, bool upper)
{
    const double zc = (upper ? 1.0 : -1.0) * std::tanh(chart.d_half(lambda));
    return std::acos(zc);
}

} // namespace

double spiral_gap(const SlabChart& chart, const SpiralProfile& spiral, double theta_p, bool upper,
                  const IdealCircle& circle, const BarrierOptions& opts)
{
    const Vec3& c = circle.center;
    const double rho = circle.angular_radius;
    auto excess = [&](double th) { return sphere_angle(spiral_ideal_point(chart, spiral, th, upper), c) - rho; };

    // limit circles
    const double colat_c = std::acos(std::clamp(c.z(), -1.0, 1.0));
    const SlabSpec& s = chart.spec();
    double gap = std::min(std::abs(colat_c - circle_colatitude(chart, s.lambda1, upper)),
                          std::abs(colat_c - circle_colatitude(chart, s.lambda2, upper))) -
                 rho;

    for (int k = -opts.turns; k <= opts.turns; ++k) {
        const double base = theta_p + 2.0 * kPi * k;
        const int n = opts.samples_per_turn;
        double best = std::numeric_limits<double>::infinity(), best_th = base;
        for (int i = 0; i <= n; ++i) {
            const double th = base - kPi + 2.0 * kPi * i / n;
            if (k == 0 && std::abs(th - theta_p) < 1e-300) continue;
            const double e = excess(th);
            if (e < best) {
                best = e;
                best_th = th;
            }
        }
        const double w = 2.0 * kPi / n;
        if (k == 0) {
            // geometric offsets resolve the neighbourhood of the tangency point
            for (double off = 1e-9; off < w; off *= 1.5) {
                best = std::min({best, excess(theta_p + off), excess(theta_p - off)});
            }
            gap = std::min(gap, best);
            continue;
        }
        const Extremum e = golden_section_max([&](double th) { return -excess(th); }, best_th - w, best_th + w, 1e-12);
        gap = std::min({gap, best, -e.f});
    }
    return gap;
}

std::pair<BarrierDisk, BarrierDisk> barrier_disks(const SlabChart& chart, const SpiralProfile& spiral, double theta_p,
                                                  bool upper, const BarrierOptions& opts)
{
    require(std::isfinite(theta_p), ErrorCode::range, "barrier point at a spiral end");
    const Vec3 p = spiral_ideal_point(chart, spiral, theta_p, upper);
    const Vec3 T = spiral_tangent(chart, spiral, theta_p, upper);
    const Vec3 nu = p.cross(T).normalized();

    auto make = [&](int which) {
        const Vec3 side = which == 1 ? nu : Vec3(-nu);
        auto circle = [&](double rho) { return IdealCircle{(std::cos(rho) * p + std::sin(rho) * side).normalized(), rho}; };
        auto ok = [&](double rho) { return spiral_gap(chart, spiral, theta_p, upper, circle(rho), opts) >= -1e-13; };
        double lo = 0.0, hi = 0.5 * kPi;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (ok(mid) ? lo : hi) = mid;
            if (hi - lo < 1e-15 * hi) break;
        }
        if (!(lo > 0.0)) fail(ErrorCode::range, fmt::format("degenerate maximal circle at theta = {}", theta_p));
        const IdealCircle C = circle(lo);
        const double t = std::atanh(chart.spec().H);
        return BarrierDisk{theta_p, upper, which, p, C, equidistant_surface(C, t)};
    };
    return {make(1), make(2)};
}

std::vector<BarrierDisk> sample_barriers(const SlabChart& chart, const SpiralProfile& spiral, int count,
                                         const BarrierOptions& opts)
{
    std::vector<BarrierDisk> out;
    const int pairs = std::max(1, count / 2);
    for (int k = 0; k < pairs; ++k) {
        const double th = pairs == 1 ? 0.0 : -3.0 + 6.0 * k / (pairs - 1);
        auto [a, b] = barrier_disks(chart, spiral, th, k % 2 == 0, opts);
        out.push_back(a);
        out.push_back(b);
    }
    return out;
}

} // namespace cmclab
