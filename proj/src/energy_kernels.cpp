#include "cmclab/energy_kernels.hpp"

#include <vector>

namespace cmclab {

namespace {

void terms_serial(const GraphProblem& p, const Eigen::VectorXd& u, bool energy, bool gradient,
                  std::vector<TriangleTerm>& terms)
{
    const int n = static_cast<int>(terms.size());
    for (int t = 0; t < n; ++t) p.triangle_term(t, u, energy, gradient, terms[t]);
}

void terms_openmp(const GraphProblem& p, const Eigen::VectorXd& u, bool energy, bool gradient,
                  std::vector<TriangleTerm>& terms)
{
    const int n = static_cast<int>(terms.size());
#pragma omp parallel for schedule(static)
    for (int t = 0; t < n; ++t) p.triangle_term(t, u, energy, gradient, terms[t]);
}

void gather(const GraphProblem& p, const std::vector<TriangleTerm>& terms, Eigen::VectorXd* gI, Eigen::VectorXd* gV,
            bool parallel)
{
    const int n = p.size();
    const double twoH = 2.0 * p.H();
    const auto& inc = p.incidence();
    if (gI) gI->setZero(n);
    if (gV) gV->setZero(n);
#pragma omp parallel for schedule(static) if (parallel)
    for (int k = 0; k < n; ++k) {
        double a = 0.0, v = 0.0;
        for (const auto& [t, loc] : inc[k]) {
            a += terms[t].gA[loc];
            v += terms[t].gV[loc];
        }
        if (gI) (*gI)[k] = a + twoH * v;
        if (gV) (*gV)[k] = v;
    }
}

} // namespace

Energy evaluate_energy(const GraphProblem& p, const Eigen::VectorXd& u, Eigen::VectorXd* grad_I, Eigen::VectorXd* grad_V,
                       Kernel kernel, bool need_energy)
{
    const bool gradient = grad_I || grad_V;
    std::vector<TriangleTerm> terms(p.triangles().size());
    if (kernel == Kernel::serial)
        terms_serial(p, u, need_energy, gradient, terms);
    else
        terms_openmp(p, u, need_energy, gradient, terms);

    Energy e;
    for (const TriangleTerm& t : terms) {
        e.A += t.A;
        e.V += t.V;
    }
    e.I = e.A + 2.0 * p.H() * e.V;
    if (gradient) gather(p, terms, grad_I, grad_V, kernel == Kernel::openmp);
    return e;
}

} // namespace cmclab
