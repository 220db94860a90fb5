#include "cmclab/grid_mesh.hpp"

#include "cmclab/errors.hpp"

#include <cmath>

namespace cmclab {

std::vector<std::array<int, 3>> GridMesh::faces() const
{
    std::vector<std::array<int, 3>> out;
    const int cols = periodic_v ? nv : nv - 1;
    out.reserve(static_cast<size_t>(2 * (nu - 1) * cols));
    for (int i = 0; i + 1 < nu; ++i) {
        for (int j = 0; j < cols; ++j) {
            const int jn = (j + 1) % nv;
            const int a = i * nv + j;
            const int b = i * nv + jn;
            const int c = (i + 1) * nv + j;
            const int d = (i + 1) * nv + jn;
            out.push_back({a, b, d});
            out.push_back({a, d, c});
        }
    }
    return out;
}

Vec4 hyperboloid_normal(const Vec4& X, const Vec4& a, const Vec4& b)
{
    Eigen::Matrix<double, 3, 4> m;
    m.row(0) = X.transpose();
    m.row(1) = a.transpose();
    m.row(2) = b.transpose();
    Vec4 w;
    for (int k = 0; k < 4; ++k) {
        Eigen::Matrix3d minor;
        int c = 0;
        for (int col = 0; col < 4; ++col) {
            if (col == k) continue;
            minor.col(c++) = m.col(col);
        }
        w[k] = ((k % 2) ? -1.0 : 1.0) * minor.determinant();
    }
    w[0] = -w[0]; // raise the index with the Minkowski metric
    const double len2 = lorentz_dot(w, w);
    require(len2 > 0.0, ErrorCode::numeric, "degenerate tangent plane");
    return w / std::sqrt(len2);
}

CurvatureSample mean_curvature_from_derivatives(const Vec4& X, const Vec4& xu, const Vec4& xv, const Vec4& xuu,
                                                const Vec4& xuv, const Vec4& xvv)
{
    const Vec4 n = hyperboloid_normal(X, xu, xv);
    const double E = lorentz_dot(xu, xu);
    const double F = lorentz_dot(xu, xv);
    const double G = lorentz_dot(xv, xv);
    const double L = lorentz_dot(xuu, n);
    const double M = lorentz_dot(xuv, n);
    const double N = lorentz_dot(xvv, n);
    const double det = E * G - F * F;
    require(det > 0.0, ErrorCode::numeric, "degenerate first fundamental form");
    CurvatureSample s;
    s.mean_curvature = (G * L - 2.0 * F * M + E * N) / (2.0 * det);
    s.position = X;
    s.normal = n;
    return s;
}

std::vector<CurvatureSample> grid_mean_curvature(const GridMesh& mesh, int margin)
{
    require(mesh.nu >= 3 && mesh.nv >= 3, ErrorCode::range, "grid too small for central differences");
    margin = std::max(margin, 1);
    std::vector<Vec4> X(mesh.vertices.size());
    for (size_t k = 0; k < X.size(); ++k) X[k] = to_hyperboloid(mesh.vertices[k]);
    auto at = [&](int i, int j) -> const Vec4& {
        if (mesh.periodic_v) j = (j % mesh.nv + mesh.nv) % mesh.nv;
        return X[static_cast<size_t>(i) * mesh.nv + j];
    };

    const int j_lo = mesh.periodic_v ? 0 : margin;
    const int j_hi = mesh.periodic_v ? mesh.nv : mesh.nv - margin;
    std::vector<CurvatureSample> out;
    for (int i = margin; i < mesh.nu - margin; ++i) {
        for (int j = j_lo; j < j_hi; ++j) {
            const Vec4 xu = 0.5 * (at(i + 1, j) - at(i - 1, j));
            const Vec4 xv = 0.5 * (at(i, j + 1) - at(i, j - 1));
            const Vec4 xuu = at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j);
            const Vec4 xvv = at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1);
            const Vec4 xuv = 0.25 * (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1));
            CurvatureSample s = mean_curvature_from_derivatives(at(i, j), xu, xv, xuu, xuv, xvv);
            s.i = i;
            s.j = j;
            out.push_back(s);
        }
    }
    return out;
}

CurvatureSample chart_mean_curvature(const SurfaceChart& chart, double u, double v, double h)
{
    const Vec4 c = chart(u, v);
    const Vec4 up = chart(u + h, v), um = chart(u - h, v);
    const Vec4 vp = chart(u, v + h), vm = chart(u, v - h);
    const Vec4 pp = chart(u + h, v + h), pm = chart(u + h, v - h);
    const Vec4 mp = chart(u - h, v + h), mm = chart(u - h, v - h);
    const Vec4 xu = (up - um) / (2.0 * h);
    const Vec4 xv = (vp - vm) / (2.0 * h);
    const Vec4 xuu = (up - 2.0 * c + um) / (h * h);
    const Vec4 xvv = (vp - 2.0 * c + vm) / (h * h);
    const Vec4 xuv = (pp - pm - mp + mm) / (4.0 * h * h);
    return mean_curvature_from_derivatives(c, xu, xv, xuu, xuv, xvv);
}

} // namespace cmclab
