// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include "cmclab/catenoid.hpp"
#include "cmclab/numerics.hpp"
#include "cmclab/pipeline.hpp"
#include "cmclab/sequence.hpp"

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

using namespace cmclab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, fmt::format("exception: {}", e.what())};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    fmt::print("{} {:2d} {}: {} [{:.1f}s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail, dt);
    std::fflush(stdout);
}

const std::vector<double> kH = {0.0, 0.3, 0.6, 0.9};

struct Slab03 {
    SlabChart chart;
    StripField field;
    SpiralProfile spiral;

    static SlabSpec spec()
    {
        const double c = find_cH(0.3).c_H;
        return {0.3, c + 0.05, c + 0.08};
    }
    Slab03() : chart(spec()), field(chart, -0.05), spiral{chart.spec().lambda1, chart.spec().lambda2} {}
};

Slab03& slab03()
{
    static Slab03 s;
    return s;
}

// Orders of the errors at 128 and 256: relative error for H > 0, absolute
// for the minimal case.
Outcome catenoid_curvature()
{
    double worst128 = 0.0, worst256 = 0.0, min_order = std::numeric_limits<double>::infinity();
    for (double H : kH) {
        const double c = find_cH(H).c_H;
        for (double f : {1.0, 1.5, 3.0}) {
            const CatenoidProfile prof = generating_curve(H, f * c);
            const CurvatureError e1 = catenoid_curvature_error(prof, 128, 4.0);
            const CurvatureError e2 = catenoid_curvature_error(prof, 256, 4.0);
            const double scale = H > 0.0 ? H : 1.0;
            worst128 = std::max(worst128, e1.max_abs / scale);
            worst256 = std::max(worst256, e2.max_abs / scale);
            min_order = std::min(min_order, std::log2(e1.max_abs / e2.max_abs));
        }
    }
    return {worst128 <= 0.02 && worst256 <= 0.005 && min_order >= 1.0,
            fmt::format("max error {:.3e} at 128, {:.3e} at 256, min observed order {:.2f}", worst128, worst256, min_order)};
}

Outcome first_integral()
{
    double worst = 0.0;
    for (double H : {0.0, 0.3, 0.4, 0.5, 0.6, 0.9}) {
        const double c = find_cH(H).c_H;
        for (double f : {1.0, 1.5, 3.0}) worst = std::max(worst, generating_curve(H, f * c).first_integral_drift());
    }
    return {worst < 1e-8, fmt::format("max drift of E {:.3e}", worst)};
}

// The maximum from two scan resolutions; unimodality from the sampled curve.
Outcome dh_shape()
{
    std::string d;
    bool ok = true;
    for (double H : kH) {
        const DhCurve curve = dh_curve(H, 200, 1e-2, 20.0);
        const CatenoidMax fine = find_cH(H, 1e-8, 400);
        const int changes = slope_sign_changes(curve.d);
        const double tail = curve.d.back() / curve.d_max;
        const double shift = std::abs(fine.c_H - curve.c_H);
        ok = ok && changes == 1 && shift <= 1e-3 && tail < 0.1;
        d += fmt::format("H={} c_H={:.6f} (|diff| {:.1e}) tail {:.3f}; ", H, curve.c_H, shift, tail);
    }
    return {ok, d};
}

Outcome monotone_maxima()
{
    std::vector<double> m;
    for (double H : kH) m.push_back(find_cH(H).d_max);
    const bool ok = m[0] < m[1] && m[1] < m[2] && m[2] < m[3];
    return {ok, fmt::format("d_max = {:.6f}, {:.6f}, {:.6f}, {:.6f}", m[0], m[1], m[2], m[3])};
}

Outcome pair_resolution()
{
    const CatenoidMax m = find_cH(0.4);
    const double d = 0.5 * m.d_max;
    const CatenoidPair p = resolve_pair(0.4, d);
    const double e1 = std::abs(dh(0.4, p.lambda1) - d), e2 = std::abs(dh(0.4, p.lambda2) - d);
    return {p.lambda1 < m.c_H && m.c_H < p.lambda2 && e1 <= 1e-8 && e2 <= 1e-8,
            fmt::format("lambda1 {:.10f} < c_H {:.6f} < lambda2 {:.10f}, residuals {:.1e} {:.1e}", p.lambda1, m.c_H,
                        p.lambda2, e1, e2)};
}

// Leaves are surfaces of revolution about one axis, so their distance is
// attained between meridians in a common half-plane.
Outcome foliation()
{
    const double H = 0.5, c = find_cH(H).c_H;
    std::vector<CatenoidProfile> leaves;
    for (double l : linspace(c, 3.0 * c, 12)) leaves.push_back(generating_curve(H, l));
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < leaves.size(); ++i)
        for (size_t j = i + 1; j < leaves.size(); ++j) best = std::min(best, meridian_separation(leaves[i], leaves[j], 6.0, 600));
    return {best > 0.0, fmt::format("min inter-leaf distance {:.3e} over 66 pairs", best)};
}

// Each root is checked against the signed distance to the plane computed
// directly in the hyperboloid model.
Outcome transverse_circles()
{
    const double H = 0.5, c = find_cH(H).c_H;
    const CatenoidProfile prof = generating_curve(H, c);
    const MeridianSample end = prof.at(prof.sigma_max());
    const double T = 0.9 * std::asinh(std::cosh(end.r) * std::sinh(end.x));
    int bad = 0;
    double min_slope = std::numeric_limits<double>::infinity(), worst_dist = 0.0;
    for (double t : linspace(-T, T, 40)) {
        const SliceRoots r = equidistant_slice(prof, t);
        if (r.sigma.size() != 1) {
            ++bad;
            continue;
        }
        min_slope = std::min(min_slope, std::abs(r.slope[0]));
        const Vec4 X = fermi_to_hyperboloid(prof.fermi(r.sigma[0], 0.3));
        worst_dist = std::max(worst_dist, std::abs(std::asinh(X[3]) - t));
    }
    return {bad == 0 && min_slope > 1e-6 && worst_dist < 1e-9,
            fmt::format("slices with one root 40/40 needed, bad {}; min slope {:.3e}; distance error {:.1e}", bad,
                        min_slope, worst_dist)};
}

Outcome calibration()
{
    const SlabChart& chart = slab03().chart;
    const double l0 = 0.5 * (chart.spec().lambda1 + chart.spec().lambda2);
    const double pi = std::acos(-1.0);
    auto prob = std::make_shared<const GraphProblem>(
        GraphProblem::lambda_graph(chart, pi / 2, 2.0, 64, 128, [&](double, double) { return l0; }));
    GraphSurface init = initial_surface(prob);
    for (int i = 0; i < prob->nx(); ++i)
        for (int j = 0; j < prob->ny(); ++j) {
            const int k = prob->index(i, j);
            if (!prob->fixed(k)) init.u[k] += 0.01 * std::cos(prob->xi(i)) * std::cos(pi * prob->eta(j) / 4.0);
        }
    const auto [s, rep] = minimize(init);
    const double err = (s.u.array() - l0).abs().maxCoeff();
    return {rep.converged && err <= 1e-4,
            fmt::format("sup |w - lambda0| = {:.3e} after {} iterations from a 1e-2 bump", err, rep.iterations)};
}

Outcome gradient_check()
{
    Slab03& s = slab03();
    const Omega omega(s.field, 1, default_radius(1));
    const BoundaryCurve gamma = build_gamma(omega, s.spiral, 16, 32);
    const GraphProblem p = GraphProblem::theta_graph(omega, gamma);
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> N(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd u = p.initial();
        for (int k = 0; k < p.size(); ++k)
            if (!p.fixed(k)) u[k] = std::clamp(u[k] + 0.3 * N(rng), p.lower()[k], p.upper()[k]);
        Eigen::VectorXd g;
        evaluate_energy(p, u, &g);
        double err = 0.0;
        for (int k = 0; k < p.size(); ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(u[k]));
            Eigen::VectorXd up = u, um = u;
            up[k] += h;
            um[k] -= h;
            const double fd = (evaluate_energy(p, up).I - evaluate_energy(p, um).I) / (2.0 * h);
            err = std::max(err, std::abs(fd - g[k]));
        }
        worst = std::max(worst, err / g.cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-5, fmt::format("max relative error {:.3e} over 5 perturbations", worst)};
}

double lambda_cell(const GraphProblem& p)
{
    double h = 0.0;
    for (int i = 1; i < p.nx(); ++i) h = std::max(h, p.xi(i) - p.xi(i - 1));
    return h;
}

Outcome graph_jacobi()
{
    Slab03& s = slab03();
    SequenceOptions o;
    o.n_max = 3;
    o.n_lambda = 48;
    o.n_z = 96;
    o.barriers = 0;
    const SequenceResult r = converge_sequence(s.field, s.spiral, o);
    bool ok = true;
    std::string d;
    for (const auto& m : r.members) {
        const auto& rep = m.report;
        const double cell = lambda_cell(*m.surface.problem);
        const bool in_range = rep.interior_lambda.min >= rep.boundary_lambda.min - cell &&
                              rep.interior_lambda.max <= rep.boundary_lambda.max + cell;
        ok = ok && rep.converged && rep.jacobi_min > 0.0 && in_range;
        d += fmt::format("n={} J_min {:.3e} range {}; ", m.n, rep.jacobi_min, in_range ? "ok" : "violated");
    }
    return {ok, d};
}

SequenceResult& long_sequence()
{
    static SequenceResult r = [] {
        Slab03& s = slab03();
        SequenceOptions o;
        o.n_max = 4;
        o.n_lambda = 128;
        o.n_z = 256;
        o.barriers = 8;
        return converge_sequence(s.field, s.spiral, o);
    }();
    return r;
}

Outcome barriers()
{
    const SequenceResult& r = long_sequence();
    std::string d = fmt::format("{} disks; clearance", r.barriers.size());
    for (const auto& m : r.members) d += fmt::format(" n={}: {:.4f}", m.n, m.report.barrier_clearance);
    return {r.barriers.size() == 8 && r.report.barrier_clearance > 0.0, d};
}

Outcome limit_evidence()
{
    const SequenceResult& r = long_sequence();
    const SequenceReport& rep = r.report;
    std::string d = "probe differences";
    for (double x : rep.probe_differences) d += fmt::format(" {:.3e}", x);
    d += "; lambda_n^- - lambda_1";
    for (const auto& m : r.members) d += fmt::format(" {:.2e}", m.gamma.walls.minus - m.gamma.spiral.lambda1);
    d += "; lambda_2 - lambda_n^+";
    for (const auto& m : r.members) d += fmt::format(" {:.2e}", m.gamma.spiral.lambda2 - m.gamma.walls.plus);
    d += "; trace tube";
    for (const auto& m : r.members) d += fmt::format(" {:.3e}", m.trace_distance);
    d += fmt::format("; converged {}/4", rep.valid_members);
    return {rep.valid_members == 4 && rep.differences_decrease && rep.extents_monotone && rep.trace_shrinks, d};
}

Outcome reproducibility()
{
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / fmt::format("cmclab_accept_{}", ::getpid());
    RunConfig c;
    c.n_max = 2;
    c.n_lambda = 24;
    c.n_z = 48;
    c.dh_H = {0.0, 0.3};
    c.dh_samples = 60;
    c.catenoid_mesh = 64;
    std::vector<Json> manifests;
    for (const char* run : {"a", "b"}) {
        c.out_dir = (base / run).string();
        cmd_pipeline(c);
        manifests.push_back(read_json(base / run / "manifest.json"));
    }
    fs::remove_all(base);
    bool same_files = manifests[0]["stages"] == manifests[1]["stages"];
    const std::string h = manifests[0]["run_hash"];
    return {same_files && h == manifests[1]["run_hash"].get<std::string>(),
            fmt::format("run hash {} on both runs, per-file hashes {}", h.substr(0, 16), same_files ? "equal" : "differ")};
}

} // namespace

int main()
{
    criterion(1, "catenoid mean curvature", catenoid_curvature);
    criterion(2, "first integral conservation", first_integral);
    criterion(3, "d_H shape", dh_shape);
    criterion(4, "monotone maxima", monotone_maxima);
    criterion(5, "pair resolution", pair_resolution);
    criterion(6, "foliation disjointness", foliation);
    criterion(7, "transverse circles", transverse_circles);
    criterion(8, "solver calibration", calibration);
    criterion(9, "gradient correctness", gradient_check);
    criterion(10, "graph and Jacobi positivity", graph_jacobi);
    criterion(11, "barrier disjointness", barriers);
    criterion(12, "limit evidence", limit_evidence);
    criterion(13, "reproducibility", reproducibility);
    fmt::print("{} of 13 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
