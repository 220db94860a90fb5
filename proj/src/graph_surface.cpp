#include "cmclab/graph_surface.hpp"

#include "cmclab/energy_kernels.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/numerics.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace cmclab {

namespace {

constexpr double kQuadBary[3][3] = {{2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}};

double symmetric_node(int j, int n) { return (2.0 * j - (n - 1)) / (n - 1); }

// Integral of s sqrt(D) in lambda from the inner wall to w at fixed z.
double leaf_volume_primitive(const SlabChart& chart, double w, double z)
{
    const double l1 = chart.spec().lambda1;
    if (w == l1) return 0.0;
    const GaussRule& g = gauss_legendre(8);
    const double half = 0.5 * (w - l1), mid = 0.5 * (w + l1);
    double sum = 0.0;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const SlabMetric m = chart.metric_coefficients(mid + half * g.nodes[i], z);
        sum += g.weights[i] * m.s * std::sqrt(m.D);
    }
    return half * sum;
}

} // namespace

void GraphProblem::build_topology()
{
    tris_.clear();
    grads_.clear();
    for (int i = 0; i + 1 < nx_; ++i) {
        for (int j = 0; j + 1 < ny_; ++j) {
            const int a = index(i, j), b = index(i + 1, j), c = index(i, j + 1), d = index(i + 1, j + 1);
            tris_.push_back({a, b, d});
            tris_.push_back({a, d, c});
        }
    }
    incidence_.assign(static_cast<size_t>(size()), {});
    for (size_t t = 0; t < tris_.size(); ++t)
        for (int a = 0; a < 3; ++a) incidence_[tris_[t][a]].push_back({static_cast<int>(t), a});
    grads_.resize(tris_.size());
    quad_.resize(tris_.size());
    for (size_t t = 0; t < tris_.size(); ++t) {
        double X[3], Y[3];
        for (int a = 0; a < 3; ++a) {
            X[a] = xi_[tris_[t][a] / ny_];
            Y[a] = eta_[tris_[t][a] % ny_];
        }
        const double det = (X[1] - X[0]) * (Y[2] - Y[0]) - (X[2] - X[0]) * (Y[1] - Y[0]);
        require(det > 0.0, ErrorCode::numeric, "inverted grid triangle");
        auto& g = grads_[t];
        g[0] = (Y[1] - Y[2]) / det;
        g[1] = (X[2] - X[1]) / det;
        g[2] = (Y[2] - Y[0]) / det;
        g[3] = (X[0] - X[2]) / det;
        g[4] = (Y[0] - Y[1]) / det;
        g[5] = (X[1] - X[0]) / det;
        for (int q = 0; q < 3; ++q) {
            for (int a = 0; a < 3; ++a) quad_[t][q].bary[a] = kQuadBary[q][a];
            quad_[t][q].omega = det / 6.0; // area / 3
        }
    }
}

GraphProblem GraphProblem::theta_graph(const Omega& omega, const BoundaryCurve& gamma)
{
    GraphProblem p;
    p.mode_ = GraphMode::theta_graph;
    p.chart_ = &omega.chart();
    p.H_ = p.chart_->spec().H;
    p.R_ = omega.R();
    p.nx_ = static_cast<int>(gamma.beta_minus.size());
    p.ny_ = static_cast<int>(gamma.alpha_plus.size());
    require(p.nx_ >= 3 && p.ny_ >= 3, ErrorCode::range, "graph grid needs at least 3 x 3 nodes");
    for (const SlabPoint& s : gamma.beta_minus) p.xi_.push_back(s.lambda);
    for (int j = 0; j < p.ny_; ++j) p.eta_.push_back(symmetric_node(j, p.ny_));
    for (int i = 0; i < p.nx_; ++i) p.node_Z_.push_back(omega.Z(p.xi_[i]).Z);
    p.build_topology();

    const int N = p.size();
    p.fixed_.assign(static_cast<size_t>(N), 0);
    p.lower_.resize(N);
    p.upper_.resize(N);
    p.init_.resize(N);

    std::vector<std::string> errors(static_cast<size_t>(N));
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < N; ++k) {
        const int i = k / p.ny_, j = k % p.ny_;
        try {
            const double G = omega.G(p.xi_[i], p.eta_[j] * p.node_Z_[i]);
            p.lower_[k] = -G;
            p.upper_[k] = G;
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) fail(ErrorCode::construction, e);

    const int nx = p.nx_, ny = p.ny_;
    for (int i = 0; i < nx; ++i) {
        const double f = (p.xi_[i] - p.xi_[0]) / (p.xi_[nx - 1] - p.xi_[0]);
        for (int j = 0; j < ny; ++j) {
            const int k = p.index(i, j);
            const double lo = gamma.alpha_minus[ny - 1 - j].theta, hi = gamma.alpha_plus[j].theta;
            double v = (1.0 - f) * lo + f * hi;
            bool fix = true;
            if (i == 0)
                v = lo;
            else if (i == nx - 1)
                v = hi;
            else if (j == 0)
                v = gamma.beta_minus[i].theta;
            else if (j == ny - 1)
                v = gamma.beta_plus[nx - 1 - i].theta;
            else
                fix = false;
            if (fix) {
                p.lower_[k] = std::min(p.lower_[k], v);
                p.upper_[k] = std::max(p.upper_[k], v);
            } else {
                v = std::clamp(v, p.lower_[k], p.upper_[k]);
            }
            p.fixed_[k] = fix;
            p.init_[k] = v;
        }
    }

    // Quadrature data: the lambda values of the quadrature points repeat
    // per column, so the exit arc is cached.
    std::map<double, ExitArc> arcs;
    auto arc = [&](double l) {
        auto it = arcs.find(l);
        if (it != arcs.end()) return it->second;
        return arcs.emplace(l, omega.Z(l)).first->second;
    };
    for (size_t t = 0; t < p.tris_.size(); ++t) {
        for (auto& q : p.quad_[t]) {
            double l = 0.0, zeta = 0.0;
            for (int a = 0; a < 3; ++a) {
                l += q.bary[a] * p.xi_[p.tris_[t][a] / ny];
                zeta += q.bary[a] * p.eta_[p.tris_[t][a] % ny];
            }
            q.z = zeta;
            (void)arc(l);
        }
    }
    const long T = static_cast<long>(p.tris_.size());
    errors.assign(static_cast<size_t>(T), {});
#pragma omp parallel for schedule(static)
    for (long t = 0; t < T; ++t) {
        try {
            for (auto& q : p.quad_[t]) {
                double l = 0.0;
                for (int a = 0; a < 3; ++a) l += q.bary[a] * p.xi_[p.tris_[t][a] / ny];
                const ExitArc za = arcs.at(l);
                const double zeta = q.z;
                const SlabMetric m = p.chart_->metric_coefficients(l, zeta * za.Z);
                // (u_lambda, u_z) = T (u_xi, u_eta)
                const double t01 = -zeta * za.dZ / za.Z, t11 = 1.0 / za.Z;
                const double M00 = 1.0 / m.D, M01 = -m.b / m.D, M11 = m.a / m.D;
                const double s2 = m.s * m.s;
                q.K00 = s2 * M00;
                q.K01 = s2 * (M00 * t01 + M01 * t11);
                q.K11 = s2 * (t01 * (M00 * t01 + M01 * t11) + t11 * (M01 * t01 + M11 * t11));
                const double jac = q.omega * za.Z;
                q.omega = jac * std::sqrt(m.D);
                q.nu = jac * m.s * std::sqrt(m.D);
                q.s = m.s;
                q.z = zeta * za.Z;
            }
        } catch (const std::exception& e) {
            errors[t] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) fail(ErrorCode::numeric, e);
    return p;
}

GraphProblem GraphProblem::lambda_graph(const SlabChart& chart, double theta_half, double z_half, int n_theta, int n_z,
                                        const std::function<double(double, double)>& boundary)
{
    require(n_theta >= 3 && n_z >= 3, ErrorCode::range, "graph grid needs at least 3 x 3 nodes");
    require(z_half > 0.0 && z_half <= chart.z_max(), ErrorCode::range, "lambda-graph z extent outside the chart");
    GraphProblem p;
    p.mode_ = GraphMode::lambda_graph;
    p.chart_ = &chart;
    p.H_ = chart.spec().H;
    p.nx_ = n_theta;
    p.ny_ = n_z;
    for (int i = 0; i < n_theta; ++i) p.xi_.push_back(theta_half * symmetric_node(i, n_theta));
    for (int j = 0; j < n_z; ++j) p.eta_.push_back(z_half * symmetric_node(j, n_z));
    p.build_topology();
    const int N = p.size();
    p.fixed_.assign(static_cast<size_t>(N), 0);
    p.lower_ = Eigen::VectorXd::Constant(N, chart.spec().lambda1);
    p.upper_ = Eigen::VectorXd::Constant(N, chart.spec().lambda2);
    p.init_.resize(N);
    for (int i = 0; i < n_theta; ++i) {
        for (int j = 0; j < n_z; ++j) {
            const int k = p.index(i, j);
            p.init_[k] = std::clamp(boundary(p.xi_[i], p.eta_[j]), p.lower_[k], p.upper_[k]);
            p.fixed_[k] = (i == 0 || j == 0 || i == n_theta - 1 || j == n_z - 1);
        }
    }
    for (size_t t = 0; t < p.tris_.size(); ++t) {
        for (auto& q : p.quad_[t]) {
            q.z = 0.0;
            for (int a = 0; a < 3; ++a) q.z += q.bary[a] * p.eta_[p.tris_[t][a] % n_z];
        }
    }
    return p;
}

bool GraphProblem::away_from_corners(int k, int margin) const
{
    if (fixed(k)) return false;
    const int i = k / ny_, j = k % ny_;
    const bool near_i = i < margin || i > nx_ - 1 - margin;
    const bool near_j = j < margin || j > ny_ - 1 - margin;
    return !(near_i && near_j);
}

void GraphProblem::triangle_term(int t, const Eigen::VectorXd& u, bool energy, bool gradient, TriangleTerm& out) const
{
    out = TriangleTerm{};
    const auto& tri = tris_[t];
    const auto& g = grads_[t];
    const double u0 = u[tri[0]], u1 = u[tri[1]], u2 = u[tri[2]];
    const double px = u0 * g[0] + u1 * g[2] + u2 * g[4];
    const double py = u0 * g[1] + u1 * g[3] + u2 * g[5];

    if (mode_ == GraphMode::theta_graph) {
        for (const Quad& q : quad_[t]) {
            const double kx = q.K00 * px + q.K01 * py;
            const double ky = q.K01 * px + q.K11 * py;
            const double sq = std::sqrt(1.0 + px * kx + py * ky);
            const double uq = q.bary[0] * u0 + q.bary[1] * u1 + q.bary[2] * u2;
            out.A += q.omega * sq;
            out.V += q.nu * uq;
            if (gradient) {
                const double c = q.omega / sq;
                for (int a = 0; a < 3; ++a) {
                    out.gA[a] += c * (kx * g[2 * a] + ky * g[2 * a + 1]);
                    out.gV[a] += q.nu * q.bary[a];
                }
            }
        }
        return;
    }

    for (const Quad& q : quad_[t]) {
        const double w = q.bary[0] * u0 + q.bary[1] * u1 + q.bary[2] * u2;
        const SlabMetric m = chart_->metric_coefficients(w, q.z);
        const double s2 = m.s * m.s;
        const double base = m.a * py * py + 2.0 * m.b * py + 1.0;
        const double Q = m.D * px * px + s2 * base;
        require(Q > 0.0, ErrorCode::numeric, fmt::format("degenerate area element in triangle {}", t));
        const double sq = std::sqrt(Q);
        out.A += q.omega * sq;
        if (energy) out.V -= q.omega * leaf_volume_primitive(*chart_, w, q.z);
        if (gradient) {
            const double D_l = m.a_l - 2.0 * m.b * m.b_l;
            const double dQdw = D_l * px * px + 2.0 * m.s * m.s_l * base + s2 * (m.a_l * py * py + 2.0 * m.b_l * py);
            const double dQdx = 2.0 * m.D * px;
            const double dQdy = s2 * (2.0 * m.a * py + 2.0 * m.b);
            const double c = q.omega / (2.0 * sq);
            const double vol = m.s * std::sqrt(m.D);
            for (int a = 0; a < 3; ++a) {
                out.gA[a] += c * (dQdw * q.bary[a] + dQdx * g[2 * a] + dQdy * g[2 * a + 1]);
                out.gV[a] -= q.omega * vol * q.bary[a];
            }
        }
    }
}

double GraphProblem::triangle_jacobi(int t, const Eigen::VectorXd& u) const
{
    const auto& tri = tris_[t];
    const auto& g = grads_[t];
    const double px = u[tri[0]] * g[0] + u[tri[1]] * g[2] + u[tri[2]] * g[4];
    const double py = u[tri[0]] * g[1] + u[tri[1]] * g[3] + u[tri[2]] * g[5];
    if (mode_ == GraphMode::theta_graph) {
        double J = std::numeric_limits<double>::infinity();
        for (const Quad& q : quad_[t]) {
            const double kx = q.K00 * px + q.K01 * py;
            const double ky = q.K01 * px + q.K11 * py;
            J = std::min(J, q.s / std::sqrt(1.0 + px * kx + py * ky));
        }
        return J;
    }
    const double w = (u[tri[0]] + u[tri[1]] + u[tri[2]]) / 3.0;
    double z = 0.0;
    for (int a = 0; a < 3; ++a) z += eta_[tri[a] % ny_] / 3.0;
    const SlabMetric m = chart_->metric_coefficients(w, z);
    const double n2 = (1.0 + 2.0 * m.b * py + m.a * py * py) / m.D + px * px / (m.s * m.s);
    return -px / std::sqrt(n2);
}

SlabPoint GraphProblem::slab_point(int k, double value) const
{
    const int i = k / ny_, j = k % ny_;
    if (mode_ == GraphMode::theta_graph) return {xi_[i], value, eta_[j] * node_Z_[i]};
    return {value, xi_[i], eta_[j]};
}

GraphSurface initial_surface(std::shared_ptr<const GraphProblem> problem)
{
    GraphSurface s;
    s.u = problem->initial();
    s.problem = std::move(problem);
    s.energy = evaluate_energy(*s.problem, s.u);
    const std::vector<double> r = curvature_residuals(s);
    s.residual_max = 0.0;
    for (double v : r)
        if (!std::isnan(v)) s.residual_max = std::max(s.residual_max, std::abs(v));
    s.jacobi_min = jacobi_diagnostic(s);
    return s;
}

std::vector<double> curvature_residuals(const GraphSurface& s, int corner_margin)
{
    const GraphProblem& p = *s.problem;
    Eigen::VectorXd gI, gV;
    evaluate_energy(p, s.u, &gI, &gV);
    std::vector<double> r(static_cast<size_t>(p.size()), std::numeric_limits<double>::quiet_NaN());
    for (int k = 0; k < p.size(); ++k)
        if (p.away_from_corners(k, corner_margin)) r[k] = -gI[k] / (2.0 * gV[k]);
    return r;
}

double jacobi_diagnostic(const GraphSurface& s)
{
    const GraphProblem& p = *s.problem;
    double J = std::numeric_limits<double>::infinity();
    for (int t = 0; t < static_cast<int>(p.triangles().size()); ++t) {
        bool interior = true;
        for (int v : p.triangles()[t]) interior = interior && !p.fixed(v);
        if (interior) J = std::min(J, p.triangle_jacobi(t, s.u));
    }
    return J;
}

namespace {

LambdaRange lambda_range(const GraphSurface& s, bool boundary)
{
    const GraphProblem& p = *s.problem;
    LambdaRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (int k = 0; k < p.size(); ++k) {
        if (p.fixed(k) != boundary) continue;
        const double l = p.slab_point(k, s.u[k]).lambda;
        r.min = std::min(r.min, l);
        r.max = std::max(r.max, l);
    }
    return r;
}

} // namespace

LambdaRange interior_lambda_range(const GraphSurface& s) { return lambda_range(s, false); }
LambdaRange boundary_lambda_range(const GraphSurface& s) { return lambda_range(s, true); }

double sample_theta_graph(const GraphSurface& s, double lambda, double z)
{
    const GraphProblem& p = *s.problem;
    require(p.mode() == GraphMode::theta_graph, ErrorCode::range, "sampling needs a theta-graph");
    const int nx = p.nx(), ny = p.ny();
    require(lambda >= p.xi(0) && lambda <= p.xi(nx - 1), ErrorCode::range, "probe lambda outside the graph domain");
    const double Z = exit_arc(p.chart(), lambda, p.ball_radius()).Z;
    const double zeta = z / Z;
    require(zeta >= -1.0 && zeta <= 1.0, ErrorCode::range, "probe z outside the graph domain");
    int i = 0;
    while (i + 2 < nx && p.xi(i + 1) < lambda) ++i;
    const int j = std::clamp(static_cast<int>(std::floor((zeta + 1.0) * 0.5 * (ny - 1))), 0, ny - 2);
    const double al = (lambda - p.xi(i)) / (p.xi(i + 1) - p.xi(i));
    const double be = (zeta - p.eta(j)) / (p.eta(j + 1) - p.eta(j));
    const double ua = s.u[p.index(i, j)], ub = s.u[p.index(i + 1, j)];
    const double uc = s.u[p.index(i, j + 1)], ud = s.u[p.index(i + 1, j + 1)];
    if (al >= be) return ua + al * (ub - ua) + be * (ud - ub);
    return ua + be * (uc - ua) + al * (ud - uc);
}

GridMesh surface_mesh(const GraphSurface& s)
{
    const GraphProblem& p = *s.problem;
    GridMesh m;
    m.nu = p.nx();
    m.nv = p.ny();
    m.vertices.resize(static_cast<size_t>(p.size()));
    for (int k = 0; k < p.size(); ++k) m.vertices[k] = p.chart().to_ball(p.slab_point(k, s.u[k]));
    return m;
}

} // namespace cmclab
