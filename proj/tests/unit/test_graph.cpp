#include "cmclab/errors.hpp"
#include "cmclab/sequence.hpp"
#include "cmclab/solver.hpp"

#include "common.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <memory>
#include <numbers>

using namespace cmclab;
using cmclab::test::slab03;

namespace {

std::shared_ptr<const GraphProblem> theta_problem(int n, int nl, int nz)
{
    const auto& s = slab03();
    static std::vector<std::unique_ptr<Omega>> keep; // the problem refers to its domain
    keep.push_back(std::make_unique<Omega>(s.field, n, default_radius(n)));
    const BoundaryCurve g = build_gamma(*keep.back(), s.spiral, nl, nz);
    return std::make_shared<const GraphProblem>(GraphProblem::theta_graph(*keep.back(), g));
}

std::shared_ptr<const GraphProblem> lambda_problem(std::function<double(double, double)> boundary, int nt = 16,
                                                   int nz = 32)
{
    return std::make_shared<const GraphProblem>(
        GraphProblem::lambda_graph(slab03().chart, std::numbers::pi / 2, 2.0, nt, nz, std::move(boundary)));
}

double mid_lambda()
{
    const SlabSpec& sp = slab03().chart.spec();
    return 0.5 * (sp.lambda1 + sp.lambda2);
}

} // namespace

TEST(Graph, KernelsAgreeBitwise)
{
    const auto p = theta_problem(1, 24, 48);
    Eigen::VectorXd u = p->initial();
    for (int k = 0; k < p->size(); ++k)
        if (!p->fixed(k)) u[k] = std::clamp(u[k] + 0.1 * std::sin(1.7 * k), p->lower()[k], p->upper()[k]);
    Eigen::VectorXd gs, gvs, go, gvo;
    const Energy es = evaluate_energy(*p, u, &gs, &gvs, Kernel::serial);
    const Energy eo = evaluate_energy(*p, u, &go, &gvo, Kernel::openmp);
    EXPECT_EQ(es.I, eo.I);
    EXPECT_EQ(es.A, eo.A);
    EXPECT_EQ(es.V, eo.V);
    EXPECT_TRUE(gs == go);
    EXPECT_TRUE(gvs == gvo);
    EXPECT_DOUBLE_EQ(es.I, es.A + 2.0 * p->H() * es.V);
}

TEST(Graph, GradientMatchesDifferences)
{
    const auto p = theta_problem(1, 12, 24);
    Eigen::VectorXd u = p->initial();
    for (int k = 0; k < p->size(); ++k)
        if (!p->fixed(k)) u[k] = std::clamp(u[k] + 0.2 * std::cos(0.9 * k), p->lower()[k], p->upper()[k]);
    Eigen::VectorXd g;
    evaluate_energy(*p, u, &g);
    const double scale = g.cwiseAbs().maxCoeff();
    for (int k = 0; k < p->size(); ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(u[k]));
        Eigen::VectorXd up = u, um = u;
        up[k] += h;
        um[k] -= h;
        const double fd = (evaluate_energy(*p, up).I - evaluate_energy(*p, um).I) / (2 * h);
        EXPECT_NEAR(fd, g[k], 1e-5 * scale) << "node " << k;
    }
}

// The exact leaf is critical up to discretization error, which drops at
// second order under refinement.
TEST(Graph, LeafIsCritical)
{
    const double l0 = mid_lambda();
    auto worst = [&](int nt) {
        const auto p = lambda_problem([&](double, double) { return l0; }, nt, 2 * nt);
        GraphSurface s = initial_surface(p);
        s.u.setConstant(l0);
        EXPECT_NEAR(jacobi_diagnostic(s), 0.0, 1e-12); // d_theta is tangent to a leaf
        double w = 0.0;
        for (double r : curvature_residuals(s))
            if (!std::isnan(r)) w = std::max(w, std::abs(r));
        return w;
    };
    const double coarse = worst(16), fine = worst(32);
    std::printf("leaf residual %.3e -> %.3e\n", coarse, fine);
    EXPECT_LT(fine, 1e-5);
    EXPECT_GT(coarse / fine, 3.0);
}

TEST(Solver, RecoversLeafFromBump)
{
    const double l0 = mid_lambda();
    const auto p = lambda_problem([&](double, double) { return l0; });
    GraphSurface init = initial_surface(p);
    for (int i = 0; i < p->nx(); ++i)
        for (int j = 0; j < p->ny(); ++j)
            if (const int k = p->index(i, j); !p->fixed(k))
                init.u[k] += 0.005 * std::cos(p->xi(i)) * std::cos(std::numbers::pi * p->eta(j) / 4);
    const Eigen::VectorXd before = init.u;
    const auto [s, rep] = minimize(init);
    EXPECT_TRUE(rep.converged);
    EXPECT_LT((s.u.array() - l0).abs().maxCoeff(), 1e-6);
    for (int k = 0; k < p->size(); ++k)
        if (p->fixed(k)) EXPECT_EQ(s.u[k], before[k]);
    for (size_t i = 1; i < rep.energy_history.size(); ++i) {
        const double noise = 16 * 2.2e-16 * std::max(1.0, std::abs(rep.energy_history[i - 1]));
        EXPECT_LE(rep.energy_history[i], rep.energy_history[i - 1] + noise);
    }
}

TEST(Solver, BarzilaiBorweinConverges)
{
    const double l0 = mid_lambda();
    const auto p = lambda_problem([&](double, double) { return l0; }, 10, 20);
    GraphSurface init = initial_surface(p);
    for (int k = 0; k < p->size(); ++k)
        if (!p->fixed(k)) init.u[k] += 0.002;
    SolveOptions o;
    o.method = Optimizer::bb;
    o.tol = 1e-7;
    o.max_iter = 5000;
    const auto [s, rep] = minimize(init, o);
    EXPECT_TRUE(rep.converged) << rep.iterations << " iterations, gradient " << rep.grad_norm;
    EXPECT_EQ(rep.method, "bb");
    EXPECT_LT((s.u.array() - l0).abs().maxCoeff(), 1e-5);
}

// Comparison: raising the boundary data raises the solution.
TEST(Solver, SolutionsAreOrdered)
{
    const double l0 = mid_lambda();
    auto data = [&](double shift) {
        return [=](double th, double z) { return l0 + shift + 0.004 * std::sin(th) * std::cos(0.5 * z); };
    };
    const auto lo = minimize(initial_surface(lambda_problem(data(-0.002)))).first;
    const auto hi = minimize(initial_surface(lambda_problem(data(0.002)))).first;
    EXPECT_GE((hi.u - lo.u).minCoeff(), 0.0);
}

TEST(Solver, RejectsMovedBoundary)
{
    const auto p = lambda_problem([&](double, double) { return mid_lambda(); }, 8, 8);
    GraphSurface init = initial_surface(p);
    init.u[0] += 1e-3;
    try {
        minimize(init);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::precondition);
    }
}

TEST(Solver, ThetaGraphIsStable)
{
    const auto p = theta_problem(1, 24, 48);
    const auto [s, rep] = minimize(initial_surface(p));
    ASSERT_TRUE(rep.converged);
    EXPECT_GT(rep.jacobi_min, 0.0);
    EXPECT_LE(rep.grad_norm, SolveOptions{}.tol);
    for (int k = 0; k < p->size(); ++k) {
        EXPECT_GE(s.u[k], p->lower()[k]);
        EXPECT_LE(s.u[k], p->upper()[k]);
    }
    const GridMesh m = surface_mesh(s);
    EXPECT_EQ(static_cast<int>(m.vertices.size()), p->size());
}

TEST(Sequence, SmallRun)
{
    const auto& s = slab03();
    SequenceOptions o;
    o.n_max = 2;
    o.n_lambda = 24;
    o.n_z = 48;
    o.barriers = 4;
    o.barrier = {2, 256};
    const SequenceResult r = converge_sequence(s.field, s.spiral, o);
    ASSERT_EQ(r.members.size(), 2u);
    EXPECT_EQ(r.report.valid_members, 2);
    EXPECT_EQ(r.report.probe_differences.size(), 1u);
    EXPECT_TRUE(r.report.extents_monotone);
    EXPECT_TRUE(r.report.trace_shrinks);
    EXPECT_EQ(r.barriers.size(), 4u);
    EXPECT_GT(r.report.barrier_clearance, 0.0);
    EXPECT_EQ(deck_offset(2), 0.0);

    SequenceOptions bad = o;
    bad.radii = {3.0};
    EXPECT_THROW(converge_sequence(s.field, s.spiral, bad), Error);
}
