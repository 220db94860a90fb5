#include "cmclab/numerics.hpp"

#include "cmclab/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <cmath>

namespace cmclab {

namespace {

template <unsigned N>
GaussRule make_rule()
{
    using Q = boost::math::quadrature::gauss<double, N>;
    const auto& x = Q::abscissa();
    const auto& w = Q::weights();
    GaussRule r;
    // Boost stores the non-negative half.
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            r.nodes.push_back(0.0);
            r.weights.push_back(w[i]);
            continue;
        }
        r.nodes.push_back(-x[i]);
        r.weights.push_back(w[i]);
        r.nodes.push_back(x[i]);
        r.weights.push_back(w[i]);
    }
    return r;
}

} // namespace

const GaussRule& gauss_legendre(int n)
{
    static const GaussRule g4 = make_rule<4>();
    static const GaussRule g8 = make_rule<8>();
    static const GaussRule g10 = make_rule<10>();
    static const GaussRule g16 = make_rule<16>();
    switch (n) {
    case 4: return g4;
    case 8: return g8;
    case 10: return g10;
    case 16: return g16;
    default: fail(ErrorCode::range, fmt::format("no Gauss-Legendre rule of order {}", n));
    }
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, double panel, int order)
{
    if (b == a) return 0.0;
    const GaussRule& g = gauss_legendre(order);
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / panel - 1e-12)));
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int p = 0; p < n; ++p) {
        const double mid = a + (p + 0.5) * h;
        double s = 0.0;
        for (size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
        sum += 0.5 * h * s;
    }
    return sum;
}

double find_root(const std::function<double(double)>& f, double a, double b, double xtol, int max_iter)
{
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (!(fa * fb < 0.0))
        fail(ErrorCode::numeric, fmt::format("root not bracketed on [{:.17g}, {:.17g}]: f = {:.3e}, {:.3e}", a, b, fa, fb));
    boost::uintmax_t it = static_cast<boost::uintmax_t>(max_iter);
    auto tol = [xtol](double l, double r) { return std::abs(r - l) <= xtol * std::max(1.0, std::abs(l)); };
    auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, it);
    if (it >= static_cast<boost::uintmax_t>(max_iter))
        fail(ErrorCode::numeric, fmt::format("root finder hit {} iterations", max_iter));
    // Return the end with the smaller residual.
    return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

Extremum golden_section_max(const std::function<double(double)>& f, double a, double b, double xtol)
{
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? Extremum{c, fc} : Extremum{d, fd};
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    if (n > 1) v.back() = b;
    return v;
}

std::vector<double> logspace(double a, double b, int n)
{
    require(a > 0.0 && b > 0.0, ErrorCode::range, "logspace endpoints must be positive");
    std::vector<double> v = linspace(std::log(a), std::log(b), n);
    for (double& x : v) x = std::exp(x);
    if (n > 0) v.front() = a;
    if (n > 1) v.back() = b;
    return v;
}

LagrangeStencil lagrange4(double x0, double h, int n, double x)
{
    require(n >= 4, ErrorCode::range, "cubic interpolation needs four nodes");
    const double t = (x - x0) / h;
    int k = static_cast<int>(std::floor(t)) - 1;
    k = std::clamp(k, 0, n - 4);
    LagrangeStencil s;
    s.first = k;
    const double u = t - k; // position within nodes 0..3
    for (int i = 0; i < 4; ++i) {
        double den = 1.0;
        for (int j = 0; j < 4; ++j)
            if (j != i) den *= i - j;
        double w = 1.0, dw = 0.0, ddw = 0.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            w *= u - j;
            double p1 = 1.0;
            for (int m = 0; m < 4; ++m)
                if (m != i && m != j) p1 *= u - m;
            dw += p1;
            for (int m = 0; m < 4; ++m) {
                if (m == i || m == j) continue;
                double p2 = 1.0;
                for (int q = 0; q < 4; ++q)
                    if (q != i && q != j && q != m) p2 *= u - q;
                ddw += p2;
            }
        }
        s.w[i] = w / den;
        s.dw[i] = dw / den / h;
        s.ddw[i] = ddw / den / (h * h);
    }
    return s;
}

int slope_sign_changes(std::span<const double> y)
{
    int changes = 0;
    int last = 0;
    for (size_t i = 1; i < y.size(); ++i) {
        const double d = y[i] - y[i - 1];
        const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

} // namespace cmclab
