#pragma once

// Discrete graphs over the slab solved for critical points of
//   I = A + 2H V.
//
// theta_graph: theta = u(lambda, z) over the mapped grid
//   (lambda_i, zeta_j), z = zeta Z_n(lambda),
// with boundary values from Gamma_n and the obstacle |u| <= G_n.
// lambda_graph: lambda = w(theta, z) over a rectangle, used for the
// rotational calibration against a leaf.
//
// P1 elements on a structured triangulation, three-point quadrature.
// V is measured on the side containing the lambda2 wall:
//   theta_graph: V = int u s sqrt(D) dlambda dz,
//   lambda_graph: V = -int P(w, z) dtheta dz, dP/dlambda = s sqrt(D).

#include "cmclab/domain.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace cmclab {

enum class GraphMode { theta_graph, lambda_graph };

struct Energy {
    double A = 0.0;
    double V = 0.0;
    double I = 0.0;
};

// Contribution of one triangle; the unit of work of the energy kernels.
struct TriangleTerm {
    double A = 0.0;
    double V = 0.0;
    double gA[3] = {0.0, 0.0, 0.0};
    double gV[3] = {0.0, 0.0, 0.0};
};

class GraphProblem {
public:
    static GraphProblem theta_graph(const Omega& omega, const BoundaryCurve& gamma);
    static GraphProblem lambda_graph(const SlabChart& chart, double theta_half, double z_half, int n_theta, int n_z,
                                     const std::function<double(double, double)>& boundary);

    GraphMode mode() const { return mode_; }
    double H() const { return H_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int size() const { return nx_ * ny_; }
    int index(int i, int j) const { return i * ny_ + j; }
    double xi(int i) const { return xi_[i]; }
    double eta(int j) const { return eta_[j]; }

    const std::vector<std::array<int, 3>>& triangles() const { return tris_; }
    // (triangle, local vertex) pairs per node, in ascending triangle order
    const std::vector<std::vector<std::pair<int, int>>>& incidence() const { return incidence_; }

    bool fixed(int k) const { return fixed_[k] != 0; }
    const Eigen::VectorXd& lower() const { return lower_; }
    const Eigen::VectorXd& upper() const { return upper_; }
    const Eigen::VectorXd& initial() const { return init_; }
    Eigen::VectorXd& initial() { return init_; }

    // Nodes at least `margin` cells from every corner and off the boundary.
    bool away_from_corners(int k, int margin) const;

    void triangle_term(int t, const Eigen::VectorXd& u, bool energy, bool gradient, TriangleTerm& out) const;

    // Jacobi value s / sqrt(1 + |grad u|^2) at the centroid of triangle t
    // (theta_graph), or <nu, d_theta> for the lambda_graph.
    double triangle_jacobi(int t, const Eigen::VectorXd& u) const;

    SlabPoint slab_point(int k, double value) const;
    const SlabChart& chart() const { return *chart_; }

    // lambda node values and the exit arc length at each (theta_graph)
    const std::vector<double>& node_Z() const { return node_Z_; }
    double ball_radius() const { return R_; }

private:
    struct Quad {
        double bary[3];
        double omega = 0.0;              // area weight
        double K00 = 0, K01 = 0, K11 = 0; // theta_graph gradient form
        double nu = 0.0;                 // theta_graph volume weight
        double s = 0.0;
        double z = 0.0;                  // lambda_graph
    };

    GraphProblem() = default;
    void build_topology();

    GraphMode mode_ = GraphMode::theta_graph;
    const SlabChart* chart_ = nullptr;
    double H_ = 0.0;
    double R_ = 0.0;
    int nx_ = 0, ny_ = 0;
    std::vector<double> xi_, eta_;
    std::vector<double> node_Z_;
    std::vector<std::array<int, 3>> tris_;
    std::vector<std::array<double, 6>> grads_; // d phi_a / d(xi, eta), a = 0..2
    std::vector<std::array<Quad, 3>> quad_;
    std::vector<std::vector<std::pair<int, int>>> incidence_;
    std::vector<char> fixed_;
    Eigen::VectorXd lower_, upper_, init_;
};

struct GraphSurface {
    std::shared_ptr<const GraphProblem> problem;
    Eigen::VectorXd u;
    Energy energy;
    double residual_max = 0.0;
    double jacobi_min = 0.0;
};

GraphSurface initial_surface(std::shared_ptr<const GraphProblem> problem);

// Mean curvature error H_k - H at free nodes from the energy gradient,
// NaN at boundary nodes and within `corner_margin` cells of a corner.
std::vector<double> curvature_residuals(const GraphSurface& s, int corner_margin = 3);

double jacobi_diagnostic(const GraphSurface& s);

struct LambdaRange {
    double min = 0.0;
    double max = 0.0;
};
// Range of the leaf parameter over interior nodes and over boundary nodes.
LambdaRange interior_lambda_range(const GraphSurface& s);
LambdaRange boundary_lambda_range(const GraphSurface& s);

// Value of a theta_graph at slab (lambda, z) by linear interpolation on the
// triangulation; throws range if outside the grid.
double sample_theta_graph(const GraphSurface& s, double lambda, double z);

// Grid mesh of the graph pushed to the ball.
GridMesh surface_mesh(const GraphSurface& s);

} // namespace cmclab
