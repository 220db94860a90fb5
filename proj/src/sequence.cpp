#include "cmclab/sequence.hpp"

#include "cmclab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cmclab {

double deck_offset(int) { return 0.0; }

double barrier_clearance(const GraphSurface& s, const std::vector<BarrierDisk>& disks)
{
    const GraphProblem& p = *s.problem;
    double c = std::numeric_limits<double>::infinity();
    for (int k = 0; k < p.size(); ++k) {
        const BallPoint q = p.chart().to_ball(p.slab_point(k, s.u[k]));
        for (const auto& d : disks) c = std::min(c, d.clearance(q));
    }
    return c;
}

namespace {

bool strictly_decreasing(const std::vector<double>& v)
{
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

} // namespace

SequenceResult converge_sequence(const StripField& field, const SpiralProfile& spiral, const SequenceOptions& opts)
{
    require(opts.n_max >= 1, ErrorCode::range, "sequence needs n_max >= 1");
    require(opts.radii.empty() || static_cast<int>(opts.radii.size()) >= opts.n_max, ErrorCode::range,
            "radius sequence shorter than n_max");
    SequenceResult out;
    for (int n = 1; n <= opts.n_max; ++n) {
        SequenceMember m;
        m.n = n;
        m.R = opts.radii.empty() ? default_radius(n) : opts.radii[n - 1];
        const Omega omega(field, n, m.R);
        m.gamma = build_gamma(omega, spiral, opts.n_lambda, opts.n_z);
        m.trace_distance = spiral_trace_distance(m.gamma, field.chart());
        auto problem = std::make_shared<const GraphProblem>(GraphProblem::theta_graph(omega, m.gamma));
        auto [surface, report] = minimize(initial_surface(problem), opts.solve);
        m.surface = std::move(surface);
        m.report = std::move(report);
        out.members.push_back(std::move(m));
    }

    SequenceReport& r = out.report;
    r.valid_members = 0;
    while (r.valid_members < opts.n_max && out.members[r.valid_members].report.converged) ++r.valid_members;

    const GraphProblem& p1 = *out.members.front().surface.problem;
    const double lo = p1.xi(0), hi = p1.xi(p1.nx() - 1);
    const double mid = 0.5 * (lo + hi), half = opts.probe_fraction * (hi - lo);
    r.probe = {mid - half, mid + half, -opts.probe_z, opts.probe_z};
    const int ns = std::max(2, opts.probe_samples);
    for (int n = 0; n + 1 < opts.n_max; ++n) {
        const auto& a = out.members[n].surface;
        const auto& b = out.members[n + 1].surface;
        const double shift = deck_offset(n + 2) - deck_offset(n + 1);
        double d = 0.0;
        for (int i = 0; i < ns; ++i) {
            const double lam = r.probe.lambda_lo + (r.probe.lambda_hi - r.probe.lambda_lo) * i / (ns - 1);
            for (int j = 0; j < ns; ++j) {
                const double z = r.probe.z_lo + (r.probe.z_hi - r.probe.z_lo) * j / (ns - 1);
                d = std::max(d, std::abs(sample_theta_graph(b, lam, z) - shift - sample_theta_graph(a, lam, z)));
            }
        }
        r.probe_differences.push_back(d);
    }
    r.differences_decrease = strictly_decreasing(r.probe_differences);

    std::vector<double> minus, plus_gap, trace;
    for (const auto& m : out.members) {
        minus.push_back(m.gamma.walls.minus);
        plus_gap.push_back(-m.gamma.walls.plus);
        trace.push_back(m.trace_distance);
    }
    r.extents_monotone = strictly_decreasing(minus) && strictly_decreasing(plus_gap);
    r.trace_shrinks = strictly_decreasing(trace);

    out.barriers = sample_barriers(field.chart(), spiral, opts.barriers, opts.barrier);
    r.barrier_clearance = std::numeric_limits<double>::infinity();
    for (auto& m : out.members) {
        m.report.barrier_clearance = barrier_clearance(m.surface, out.barriers);
        r.barrier_clearance = std::min(r.barrier_clearance, m.report.barrier_clearance);
    }
    return out;
}

} // namespace cmclab
