#pragma once

// Energy and gradient assembly. Both kernels compute identical per-triangle
// terms and reduce them in the same fixed order, so their results agree
// bitwise; the serial one is the reference.

#include "cmclab/graph_surface.hpp"

namespace cmclab {

enum class Kernel { serial, openmp };

// Fills grad_I (and grad_V) when non-null; gradients are zero at fixed nodes
// only if the caller masks them.
Energy evaluate_energy(const GraphProblem& p, const Eigen::VectorXd& u, Eigen::VectorXd* grad_I = nullptr,
                       Eigen::VectorXd* grad_V = nullptr, Kernel kernel = Kernel::openmp, bool need_energy = true);

} // namespace cmclab
