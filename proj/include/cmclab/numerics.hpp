#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace cmclab {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n); // n in {4, 8, 10, 16}

// Composite Gauss-Legendre over uniform panels of width <= panel.
double integrate_panels(const std::function<double(double)>& f, double a, double b, double panel, int order = 10);

// Root of f in [a, b] with f(a) f(b) <= 0; throws numeric error otherwise.
double find_root(const std::function<double(double)>& f, double a, double b, double xtol = 1e-14,
                 int max_iter = 200);

struct Extremum {
    double x;
    double f;
};

// Golden-section maximizer of a unimodal f on [a, b].
Extremum golden_section_max(const std::function<double(double)>& f, double a, double b, double xtol);

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n); // endpoints a, b > 0

// Cubic Lagrange weights for x among the four uniformly spaced nodes
// x0 + (k + i) h, i = 0..3, together with their first and second
// x-derivatives.
struct LagrangeStencil {
    int first = 0;
    double w[4] = {0, 0, 0, 0};
    double dw[4] = {0, 0, 0, 0};
    double ddw[4] = {0, 0, 0, 0};
};
LagrangeStencil lagrange4(double x0, double h, int n, double x);

// Number of sign changes in consecutive differences; a unimodal sample
// has exactly one (+ to -).
int slope_sign_changes(std::span<const double> y);

} // namespace cmclab
