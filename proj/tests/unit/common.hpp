#pragma once

#include "cmclab/domain.hpp"

#include <gtest/gtest.h>

#include <random>

namespace cmclab::test {

// H = 0.3 slab used across the graph tests.
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

inline Slab03& slab03()
{
    static Slab03 s;
    return s;
}

inline BallPoint random_ball_point(std::mt19937_64& rng, double max_norm = 0.9)
{
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Vec3 v(N(rng), N(rng), N(rng));
    v *= max_norm * std::cbrt(U(rng)) / v.norm();
    return BallPoint::from(v);
}

// Lorentz Gram matrix of central-difference tangents of f at x.
template <int N, class F>
Eigen::Matrix<double, N, N> pullback(const F& f, const Eigen::Matrix<double, N, 1>& x, double h)
{
    Eigen::Matrix<double, 4, N> J;
    for (int i = 0; i < N; ++i) {
        Eigen::Matrix<double, N, 1> a = x, b = x;
        a[i] += h;
        b[i] -= h;
        J.col(i) = (f(a) - f(b)) / (2.0 * h);
    }
    const Eigen::Vector4d eta(-1, 1, 1, 1);
    return J.transpose() * eta.asDiagonal() * J;
}

} // namespace cmclab::test
