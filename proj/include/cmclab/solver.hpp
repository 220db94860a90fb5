#pragma once

#include "cmclab/energy_kernels.hpp"
#include "cmclab/graph_surface.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cmclab {

enum class Optimizer { newton, bb };

const char* to_string(Optimizer o);

struct SolveOptions {
    Optimizer method = Optimizer::newton;
    double tol = 1e-9;  // on the mass-scaled projected gradient (mean curvature units)
    int max_iter = 400;
    double armijo = 1e-4;
    Kernel kernel = Kernel::openmp;
    int corner_margin = 3;
};

struct SolveReport {
    std::string method;
    int iterations = 0;
    double grad_norm = 0.0;
    std::vector<double> energy_history; // accepted iterates, starting with the initial guess
    bool converged = false;
    LambdaRange interior_lambda;
    LambdaRange boundary_lambda;
    double wall_distance_inner = 0.0; // min interior lambda - lambda1
    double wall_distance_outer = 0.0; // lambda2 - max interior lambda
    double residual_max = 0.0;
    double jacobi_min = 0.0;
    double barrier_clearance = 0.0; // filled by callers that sample barriers
};

// Box-constrained descent on I = A + 2H V with boundary nodes pinned.
// Energy is non-increasing across accepted steps up to rounding in I.
std::pair<GraphSurface, SolveReport> minimize(const GraphSurface& init, const SolveOptions& opts = {});

// Mass-scaled projected gradient max-norm.
double projected_gradient_norm(const GraphProblem& p, const Eigen::VectorXd& u, const Eigen::VectorXd& gI,
                               const Eigen::VectorXd& gV);

} // namespace cmclab
