#pragma once

// Structured surface meshes and a finite-difference mean curvature oracle.

#include "cmclab/hyperbolic.hpp"

#include <array>
#include <functional>
#include <vector>

namespace cmclab {

// nu x nv vertex grid, row-major (index i * nv + j). With periodic_v the
// last column connects back to the first.
struct GridMesh {
    int nu = 0;
    int nv = 0;
    bool periodic_v = false;
    std::vector<BallPoint> vertices;

    const BallPoint& at(int i, int j) const { return vertices[static_cast<size_t>(i) * nv + j]; }
    BallPoint& at(int i, int j) { return vertices[static_cast<size_t>(i) * nv + j]; }
    std::vector<std::array<int, 3>> faces() const;
};

struct CurvatureSample {
    int i = 0;
    int j = 0;
    double mean_curvature = 0.0; // signed, relative to `normal`
    Vec4 position;               // hyperboloid
    Vec4 normal;                 // unit spacelike, Lorentz-orthogonal to position
};

// Unit normal to the surface through X spanned by tangents a, b.
Vec4 hyperboloid_normal(const Vec4& X, const Vec4& a, const Vec4& b);

// Mean curvature from first and second derivatives of a parametrization in
// hyperboloid coordinates. The sign is positive when the mean curvature
// vector points along the returned normal.
CurvatureSample mean_curvature_from_derivatives(const Vec4& X, const Vec4& xu, const Vec4& xv, const Vec4& xuu,
                                                const Vec4& xuv, const Vec4& xvv);

// Central-difference mean curvature at every vertex at least `margin` rows
// from a non-periodic edge.
std::vector<CurvatureSample> grid_mean_curvature(const GridMesh& mesh, int margin = 1);

using SurfaceChart = std::function<Vec4(double, double)>;

CurvatureSample chart_mean_curvature(const SurfaceChart& chart, double u, double v, double h);

} // namespace cmclab
