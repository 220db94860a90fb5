#include "cmclab/solver.hpp"

#include "cmclab/errors.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace cmclab {

const char* to_string(Optimizer o) { return o == Optimizer::newton ? "newton" : "bb"; }

namespace {

struct Adjacency {
    std::vector<std::vector<int>> nbr; // includes the node itself, sorted
    std::vector<int> color;
    int colors = 0;
};

Adjacency build_adjacency(const GraphProblem& p)
{
    const int n = p.size();
    std::vector<std::set<int>> s(static_cast<size_t>(n));
    for (const auto& t : p.triangles())
        for (int a : t)
            for (int b : t) s[a].insert(b);
    Adjacency adj;
    adj.nbr.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) adj.nbr[k].assign(s[k].begin(), s[k].end());
    // distance-2 greedy colouring: columns sharing a colour touch disjoint rows
    adj.color.assign(static_cast<size_t>(n), -1);
    std::vector<int> seen;
    for (int k = 0; k < n; ++k) {
        seen.assign(static_cast<size_t>(adj.colors) + 1, 0);
        for (int l : adj.nbr[k])
            for (int m : adj.nbr[l])
                if (adj.color[m] >= 0) seen[adj.color[m]] = 1;
        int c = 0;
        while (seen[c]) ++c;
        adj.color[k] = c;
        adj.colors = std::max(adj.colors, c + 1);
    }
    return adj;
}

bool at_bound(const GraphProblem& p, const Eigen::VectorXd& u, const Eigen::VectorXd& g, int k)
{
    return (u[k] <= p.lower()[k] && g[k] > 0.0) || (u[k] >= p.upper()[k] && g[k] < 0.0);
}

Eigen::VectorXd project(const GraphProblem& p, const Eigen::VectorXd& u)
{
    return u.cwiseMax(p.lower()).cwiseMin(p.upper());
}

struct Newton {
    const GraphProblem& p;
    const Adjacency& adj;
    Kernel kernel;

    // Central-difference Hessian of the free block from coloured gradient
    // evaluations; returns false when the factorization fails.
    bool direction(const Eigen::VectorXd& u, const Eigen::VectorXd& g, const std::vector<int>& free_index,
                   const std::vector<int>& free_nodes, Eigen::VectorXd& d) const
    {
        const int nf = static_cast<int>(free_nodes.size());
        std::vector<Eigen::Triplet<double>> trip;
        Eigen::VectorXd gp, gm;
        for (int c = 0; c < adj.colors; ++c) {
            Eigen::VectorXd up = u, um = u;
            std::vector<int> cols;
            std::vector<double> steps;
            for (int k : free_nodes) {
                if (adj.color[k] != c) continue;
                const double h = 1e-7 * std::max(1.0, std::abs(u[k]));
                up[k] += h;
                um[k] -= h;
                cols.push_back(k);
                steps.push_back(h);
            }
            if (cols.empty()) continue;
            evaluate_energy(p, up, &gp, nullptr, kernel, false);
            evaluate_energy(p, um, &gm, nullptr, kernel, false);
            for (size_t q = 0; q < cols.size(); ++q) {
                const int k = cols[q];
                for (int l : adj.nbr[k]) {
                    if (free_index[l] < 0) continue;
                    trip.emplace_back(free_index[l], free_index[k], (gp[l] - gm[l]) / (2.0 * steps[q]));
                }
            }
        }
        Eigen::SparseMatrix<double> Hm(nf, nf);
        Hm.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseMatrix<double> Hs = 0.5 * (Eigen::SparseMatrix<double>(Hm.transpose()) + Hm);
        Eigen::VectorXd rhs(nf);
        for (int q = 0; q < nf; ++q) rhs[q] = -g[free_nodes[q]];
        // Levenberg shift on the diagonal until the factorization is positive
        double dmax = 0.0;
        for (int q = 0; q < nf; ++q) dmax = std::max(dmax, std::abs(Hs.coeff(q, q)));
        if (!(dmax > 0.0)) return false;
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
        ldlt.analyzePattern(Hs);
        Eigen::VectorXd df;
        bool ok = false;
        for (double mu = 0.0; mu <= dmax; mu = mu == 0.0 ? 1e-6 * dmax : 10.0 * mu) {
            Eigen::SparseMatrix<double> Hmu = Hs;
            for (int q = 0; q < nf; ++q) Hmu.coeffRef(q, q) += mu;
            ldlt.factorize(Hmu);
            if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) continue;
            df = ldlt.solve(rhs);
            if (ldlt.info() == Eigen::Success && df.allFinite()) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
        d.setZero(p.size());
        for (int q = 0; q < nf; ++q) d[free_nodes[q]] = df[q];
        return true;
    }
};

} // namespace

double projected_gradient_norm(const GraphProblem& p, const Eigen::VectorXd& u, const Eigen::VectorXd& gI,
                               const Eigen::VectorXd& gV)
{
    double worst = 0.0;
    for (int k = 0; k < p.size(); ++k) {
        if (p.fixed(k) || at_bound(p, u, gI, k)) continue;
        worst = std::max(worst, std::abs(gI[k]) / (2.0 * std::abs(gV[k])));
    }
    return worst;
}

std::pair<GraphSurface, SolveReport> minimize(const GraphSurface& init, const SolveOptions& opts)
{
    const GraphProblem& p = *init.problem;
    const int n = p.size();
    for (int k = 0; k < n; ++k)
        if (p.fixed(k) && init.u[k] != p.initial()[k])
            fail(ErrorCode::precondition, fmt::format("initial surface moves pinned node {}", k));

    SolveReport rep;
    rep.method = to_string(opts.method);
    Eigen::VectorXd u = project(p, init.u);
    Eigen::VectorXd gI, gV;
    Energy e = evaluate_energy(p, u, &gI, &gV, opts.kernel);
    rep.energy_history.push_back(e.I);

    const Adjacency adj = build_adjacency(p);
    const Newton newton{p, adj, opts.kernel};
    Eigen::VectorXd u_prev, g_prev;
    double best = std::numeric_limits<double>::infinity();
    int stalled = 0;

    for (int it = 0; it < opts.max_iter; ++it) {
        rep.grad_norm = projected_gradient_norm(p, u, gI, gV);
        if (rep.grad_norm < opts.tol) {
            rep.converged = true;
            break;
        }
        std::vector<int> free_index(static_cast<size_t>(n), -1), free_nodes;
        for (int k = 0; k < n; ++k) {
            if (p.fixed(k) || at_bound(p, u, gI, k)) continue;
            free_index[k] = static_cast<int>(free_nodes.size());
            free_nodes.push_back(k);
        }
        // preconditioned steepest descent, the fallback and the BB base
        Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
        for (int k : free_nodes) d[k] = -gI[k] / std::abs(gV[k]);
        double alpha = 1.0;
        if (opts.method == Optimizer::newton) {
            Eigen::VectorXd dn;
            if (newton.direction(u, gI, free_index, free_nodes, dn) && dn.dot(gI) < 0.0) d = dn;
        } else if (u_prev.size() == n) {
            const Eigen::VectorXd s = u - u_prev, y = gI - g_prev;
            double sMs = 0.0, sy = 0.0;
            for (int k : free_nodes) {
                sMs += s[k] * s[k] * std::abs(gV[k]);
                sy += s[k] * y[k];
            }
            alpha = sy > 0.0 ? sMs / sy : 1.0;
        } else {
            alpha = 1e-3;
        }

        bool accepted = false;
        const double noise = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(e.I));
        for (int ls = 0; ls < 60; ++ls) {
            const Eigen::VectorXd trial = project(p, u + alpha * d);
            const double decrease = gI.dot(trial - u);
            const Energy et = evaluate_energy(p, trial, nullptr, nullptr, opts.kernel);
            bool take = et.I <= e.I + opts.armijo * decrease && et.I <= e.I;
            Eigen::VectorXd gIt, gVt;
            // Energy differences below rounding: judge by stationarity. BB steps
            // are not monotone in the gradient, so it may backtrack into this.
            if (!take && (ls == 0 || opts.method == Optimizer::bb) && et.I <= e.I + noise) {
                evaluate_energy(p, trial, &gIt, &gVt, opts.kernel, false);
                const double factor = opts.method == Optimizer::newton ? 0.5 : 0.9;
                take = projected_gradient_norm(p, trial, gIt, gVt) < factor * rep.grad_norm;
            }
            if (take) {
                u_prev = u;
                g_prev = gI;
                u = trial;
                e = evaluate_energy(p, u, &gI, &gV, opts.kernel);
                rep.energy_history.push_back(e.I);
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        const double drop = rep.energy_history.size() > 1
                                ? rep.energy_history[rep.energy_history.size() - 2] - rep.energy_history.back()
                                : 0.0;
        if (!accepted || drop > noise || rep.grad_norm < best) {
            best = std::min(best, rep.grad_norm);
            stalled = 0;
        } else if (++stalled >= 8) {
            rep.iterations = it + 1;
            break;
        }
        rep.iterations = it + 1;
        if (!accepted) break; // no decrease representable in double precision
    }
    rep.grad_norm = projected_gradient_norm(p, u, gI, gV);
    rep.converged = rep.grad_norm < opts.tol;

    GraphSurface out;
    out.problem = init.problem;
    out.u = u;
    out.energy = e;
    double rmax = 0.0;
    for (int k = 0; k < n; ++k)
        if (p.away_from_corners(k, opts.corner_margin)) rmax = std::max(rmax, std::abs(gI[k] / (2.0 * gV[k])));
    out.residual_max = rmax;
    out.jacobi_min = jacobi_diagnostic(out);
    for (int k = 0; k < n; ++k)
        if (u[k] < p.lower()[k] || u[k] > p.upper()[k]) fail(ErrorCode::numeric, fmt::format("obstacle violated at node {}", k));

    rep.residual_max = out.residual_max;
    rep.jacobi_min = out.jacobi_min;
    rep.interior_lambda = interior_lambda_range(out);
    rep.boundary_lambda = boundary_lambda_range(out);
    const SlabSpec& s = p.chart().spec();
    rep.wall_distance_inner = rep.interior_lambda.min - s.lambda1;
    rep.wall_distance_outer = s.lambda2 - rep.interior_lambda.max;
    return {out, rep};
}

} // namespace cmclab
