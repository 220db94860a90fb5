#include "cmclab/slab.hpp"

#include "cmclab/errors.hpp"
#include "cmclab/numerics.hpp"

#include <fmt/core.h>

#include <cmath>
#include <optional>

namespace cmclab {

void validate_slab(const SlabSpec& spec, double c_H)
{
    require(spec.H >= 0.0 && spec.H < 1.0, ErrorCode::range, fmt::format("H = {} outside [0, 1)", spec.H));
    require(spec.lambda2 > spec.lambda1, ErrorCode::precondition,
            fmt::format("lambda2 = {} must exceed lambda1 = {}", spec.lambda2, spec.lambda1));
    require(spec.lambda1 >= c_H, ErrorCode::precondition,
            fmt::format("lambda1 = {} lies on the unstable side (c_H = {})", spec.lambda1, c_H));
}

SlabChart::SlabChart(const SlabSpec& spec, const SlabOptions& opts)
    : spec_(spec), z_max_(opts.profile.sigma_max)
{
    require(opts.leaves >= 4, ErrorCode::range, "slab chart needs at least four leaves");
    require(spec.lambda2 > spec.lambda1 && spec.lambda1 > 0.0, ErrorCode::range, "invalid slab walls");
    h_ = (spec.lambda2 - spec.lambda1) / (opts.leaves - 1);
    std::vector<std::optional<CatenoidProfile>> built(static_cast<size_t>(opts.leaves));
    std::vector<std::string> errors(built.size());
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < opts.leaves; ++k) {
        try {
            built[k].emplace(spec.H, spec.lambda1 + k * h_, opts.profile_tol, opts.profile);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }
    for (int k = 0; k < opts.leaves; ++k) {
        if (!errors[k].empty()) fail(ErrorCode::numeric, fmt::format("slab leaf {}: {}", k, errors[k]));
        leaves_.push_back(std::move(*built[k]));
        d_half_.push_back(leaves_.back().d_half());
    }
    z_max_ = leaves_.front().sigma_max();
}

double SlabChart::leaf_lambda(int k) const
{
    return k + 1 == leaf_count() ? spec_.lambda2 : spec_.lambda1 + k * h_;
}

void SlabChart::check_lambda(double lambda) const
{
    const double slack = 1e-12 * (spec_.lambda2 - spec_.lambda1);
    require(lambda >= spec_.lambda1 - slack && lambda <= spec_.lambda2 + slack, ErrorCode::range,
            fmt::format("lambda = {:.17g} outside the slab [{:.17g}, {:.17g}]", lambda, spec_.lambda1, spec_.lambda2));
}

LeafJet SlabChart::jet(double lambda, double z) const
{
    check_lambda(lambda);
    const LagrangeStencil st = lagrange4(spec_.lambda1, h_, leaf_count(), lambda);
    LeafJet j;
    for (int i = 0; i < 4; ++i) {
        const MeridianSample m = leaves_[st.first + i].at(z);
        j.x += st.w[i] * m.x;
        j.r += st.w[i] * m.r;
        j.x_z += st.w[i] * m.dx;
        j.r_z += st.w[i] * m.dr;
        j.x_l += st.dw[i] * m.x;
        j.r_l += st.dw[i] * m.r;
        j.x_ll += st.ddw[i] * m.x;
        j.r_ll += st.ddw[i] * m.r;
        j.x_lz += st.dw[i] * m.dx;
        j.r_lz += st.dw[i] * m.dr;
    }
    return j;
}

SlabMetric SlabChart::metric_coefficients(double lambda, double z) const
{
    const LeafJet j = jet(lambda, z);
    const double c2 = std::cosh(j.r) * std::cosh(j.r);
    SlabMetric m;
    m.a = c2 * j.x_l * j.x_l + j.r_l * j.r_l;
    m.b = c2 * j.x_l * j.x_z + j.r_l * j.r_z;
    m.s = std::sinh(j.r);
    m.D = m.a - m.b * m.b;
    const double cs2 = 2.0 * std::cosh(j.r) * std::sinh(j.r) * j.r_l;
    m.a_l = cs2 * j.x_l * j.x_l + 2.0 * c2 * j.x_l * j.x_ll + 2.0 * j.r_l * j.r_ll;
    m.b_l = cs2 * j.x_l * j.x_z + c2 * (j.x_ll * j.x_z + j.x_l * j.x_lz) + j.r_ll * j.r_z + j.r_l * j.r_lz;
    m.s_l = std::cosh(j.r) * j.r_l;
    require(m.D > 0.0, ErrorCode::numeric, fmt::format("degenerate slab metric at lambda = {}, z = {}", lambda, z));
    return m;
}

double SlabChart::d_half(double lambda) const
{
    check_lambda(lambda);
    const LagrangeStencil st = lagrange4(spec_.lambda1, h_, leaf_count(), lambda);
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d += st.w[i] * d_half_[st.first + i];
    return d;
}

Vec4 SlabChart::to_hyperboloid(const SlabPoint& p) const
{
    const LeafJet j = jet(p.lambda, p.z);
    return fermi_to_hyperboloid({j.x, j.r, p.theta + kSlabThetaOffset});
}

BallPoint SlabChart::to_ball(const SlabPoint& p) const { return from_hyperboloid(to_hyperboloid(p)); }

SlabPoint SlabChart::from_ball(const BallPoint& p) const
{
    const FermiPoint f = ball_to_fermi(p);
    // Newton on (lambda, z) -> (x, r), started on the middle leaf.
    const CatenoidProfile& mid = leaves_[leaf_count() / 2];
    double lam = 0.5 * (spec_.lambda1 + spec_.lambda2);
    double z = 0.0;
    if (f.r > mid.lambda()) {
        const double rr = std::min(f.r, mid.r_samples().back());
        z = std::copysign(mid.sigma_of_r(rr), f.x);
    }
    for (int it = 0; it < 60; ++it) {
        const LeafJet j = jet(std::clamp(lam, spec_.lambda1, spec_.lambda2), z);
        const double ex = j.x - f.x, er = j.r - f.r;
        const double det = j.x_l * j.r_z - j.x_z * j.r_l;
        require(det != 0.0, ErrorCode::numeric, "singular slab chart Jacobian");
        const double dl = (j.r_z * ex - j.x_z * er) / det;
        const double dz = (-j.r_l * ex + j.x_l * er) / det;
        lam -= dl;
        z -= dz;
        if (std::abs(dl) < 1e-15 * (1.0 + std::abs(lam)) && std::abs(dz) < 1e-14 * (1.0 + std::abs(z))) break;
    }
    check_lambda(lam);
    double theta = f.theta - kSlabThetaOffset;
    theta = std::remainder(theta, 2.0 * std::numbers::pi);
    if (theta <= -std::numbers::pi) theta += 2.0 * std::numbers::pi;
    return {std::clamp(lam, spec_.lambda1, spec_.lambda2), theta, z};
}

BallPoint slab_to_ball(const SlabPoint& s, const SlabChart& chart) { return chart.to_ball(s); }

SlabPoint ball_to_slab(const BallPoint& p, const SlabChart& chart) { return chart.from_ball(p); }

Eigen::Matrix3d metric_slab(const SlabPoint& s, const SlabChart& chart)
{
    const SlabMetric m = chart.metric_coefficients(s.lambda, s.z);
    Eigen::Matrix3d g;
    g << m.a, 0.0, m.b, 0.0, m.s * m.s, 0.0, m.b, 0.0, 1.0;
    return g;
}

std::vector<BallPoint> killing_circle(const BallPoint& b, int samples)
{
    const FermiPoint f = ball_to_fermi(b);
    require(f.r > 1e-12, ErrorCode::range, "degenerate Killing orbit: point on the axis");
    std::vector<BallPoint> out;
    out.reserve(static_cast<size_t>(samples));
    for (int k = 0; k < samples; ++k)
        out.push_back(fermi_to_ball({f.x, f.r, f.theta + 2.0 * std::numbers::pi * k / samples}));
    return out;
}

double polyline_length(const std::vector<BallPoint>& pts, bool closed)
{
    double len = 0.0;
    for (size_t k = 1; k < pts.size(); ++k) len += dist_H3(pts[k - 1], pts[k]);
    if (closed && pts.size() > 1) len += dist_H3(pts.back(), pts.front());
    return len;
}

} // namespace cmclab
