#include "plates/element.hpp"

#include "plates/errors.hpp"

#include <algorithm>
#include <cmath>

namespace plates {

SubTriangleOperators dsg3_operators(const Eigen::Vector2d& v1, const Eigen::Vector2d& v2, const Eigen::Vector2d& v3) {
    const double a = v2.x() - v1.x();
    const double b = v2.y() - v1.y();
    const double c = v3.y() - v1.y();
    const double d = v3.x() - v1.x();
    const double area = 0.5 * (a * c - b * d);
    const double edge2 = std::max({(v2 - v1).squaredNorm(), (v3 - v2).squaredNorm(), (v1 - v3).squaredNorm()});
    if (!(area > 1e-12 * edge2)) fail(ErrorKind::Geometry, "degenerate or inverted triangle");

    SubTriangleOperators op;
    op.area = area;
    const double s = 1.0 / (2.0 * area);

    // membrane rows use u, v; bending rows the same pattern on theta_x, theta_y
    const double dx[3] = {b - c, c, -b};
    const double dy[3] = {d - a, -d, a};
    for (int i = 0; i < 3; ++i) {
        const int o = kNodeDofs * i;
        op.Bp(0, o + U) = dx[i];
        op.Bp(1, o + V) = dy[i];
        op.Bp(2, o + U) = dy[i];
        op.Bp(2, o + V) = dx[i];
        op.Bb(0, o + ThetaX) = dx[i];
        op.Bb(1, o + ThetaY) = dy[i];
        op.Bb(2, o + ThetaX) = dy[i];
        op.Bb(2, o + ThetaY) = dx[i];
    }

    // shear gaps measured from vertex 1
    op.Bs.row(0) << 0, 0, b - c, area, 0,   0, 0, c, a * c / 2, b * c / 2,    0, 0, -b, -b * d / 2, -b * c / 2;
    op.Bs.row(1) << 0, 0, d - a, 0, area,   0, 0, -d, -a * d / 2, -b * d / 2, 0, 0, a, a * d / 2, a * c / 2;

    op.Bp *= s;
    op.Bb *= s;
    op.Bs *= s;
    return op;
}

namespace {

double longest_edge(const Coords3& x) {
    return std::max({(x[1] - x[0]).norm(), (x[2] - x[1]).norm(), (x[0] - x[2]).norm()});
}

// Adds a subtriangle operator over (O, i, j) to the element columns, with the centre
// dofs replaced by the average of the three field nodes.
template <int Rows>
void condense(const Eigen::Matrix<double, Rows, kElementDofs>& sub, int i, int j, double weight,
              Eigen::Matrix<double, Rows, kElementDofs>& out) {
    const auto centre = sub.template middleCols<kNodeDofs>(0) / 3.0;
    for (int n = 0; n < 3; ++n) out.template middleCols<kNodeDofs>(kNodeDofs * n) += weight * centre;
    out.template middleCols<kNodeDofs>(kNodeDofs * i) += weight * sub.template middleCols<kNodeDofs>(kNodeDofs);
    out.template middleCols<kNodeDofs>(kNodeDofs * j) += weight * sub.template middleCols<kNodeDofs>(2 * kNodeDofs);
}

}  // namespace

ElementMatrices csdsg3_operators(const Coords3& x) {
    ElementMatrices em;
    const Eigen::Vector2d centre = (x[0] + x[1] + x[2]) / 3.0;
    constexpr int cycle[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    double area = 0.0;
    for (const auto& [i, j] : cycle) {
        const SubTriangleOperators sub = dsg3_operators(centre, x[i], x[j]);
        condense<3>(sub.Bp, i, j, sub.area, em.Bp_bar);
        condense<3>(sub.Bb, i, j, sub.area, em.Bb_bar);
        condense<2>(sub.Bs, i, j, sub.area, em.Bs_bar);
        area += sub.area;
    }
    em.Bp_bar /= area;
    em.Bb_bar /= area;
    em.Bs_bar /= area;
    em.area = area;
    em.longest_edge = longest_edge(x);
    return em;
}

ElementMatrices strain_operators(const Coords3& x, Smoothing smoothing) {
    if (smoothing == Smoothing::CellBased) return csdsg3_operators(x);
    const SubTriangleOperators op = dsg3_operators(x[0], x[1], x[2]);
    ElementMatrices em;
    em.Bp_bar = op.Bp;
    em.Bb_bar = op.Bb;
    em.Bs_bar = op.Bs;
    em.area = op.area;
    em.longest_edge = longest_edge(x);
    return em;
}

Matrix15 element_stiffness(const ElementMatrices& op, const SectionStiffness& sec, const Stabilization& stab) {
    Eigen::Matrix2d es = sec.Es;
    if (stab.enabled) {
        const double h2 = sec.thickness * sec.thickness;
        es *= h2 / (h2 + stab.alpha * op.longest_edge * op.longest_edge);
    }
    const Eigen::Matrix<double, 3, kElementDofs> bb_p = sec.B * op.Bb_bar;
    Matrix15 k = op.Bp_bar.transpose() * sec.A * op.Bp_bar + op.Bp_bar.transpose() * bb_p +
                 bb_p.transpose() * op.Bp_bar + op.Bb_bar.transpose() * sec.D * op.Bb_bar +
                 op.Bs_bar.transpose() * es * op.Bs_bar;
    k *= op.area;
    return 0.5 * (k + k.transpose());
}

Matrix15 element_mass(const Coords3& x, const SectionStiffness& sec) {
    const double area = 0.5 * ((x[1] - x[0]).x() * (x[2] - x[0]).y() - (x[2] - x[0]).x() * (x[1] - x[0]).y());
    if (!(area > 0.0)) fail(ErrorKind::Geometry, "degenerate or inverted triangle");
    Matrix15 m = Matrix15::Zero();
    const double inertia[kNodeDofs] = {sec.inertia_p, sec.inertia_p, sec.inertia_p, sec.inertia_i, sec.inertia_i};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < kNodeDofs; ++k)
                m(kNodeDofs * i + k, kNodeDofs * j + k) = inertia[k] * area / 12.0 * (i == j ? 2.0 : 1.0);
    return m;
}

Eigen::Matrix<double, 2, 3> shape_gradients(const Coords3& x) {
    const double area2 = (x[1] - x[0]).x() * (x[2] - x[0]).y() - (x[2] - x[0]).x() * (x[1] - x[0]).y();
    if (!(area2 > 0.0)) fail(ErrorKind::Geometry, "degenerate or inverted triangle");
    Eigen::Matrix<double, 2, 3> g;
    for (int i = 0; i < 3; ++i) {
        const auto& pj = x[(i + 1) % 3];
        const auto& pk = x[(i + 2) % 3];
        g(0, i) = (pj.y() - pk.y()) / area2;
        g(1, i) = (pk.x() - pj.x()) / area2;
    }
    return g;
}

Matrix15 element_geometric(const Coords3& x, const Eigen::Vector3d& n, double thickness) {
    Matrix15 kg = Matrix15::Zero();
    if (n.isZero(0.0)) return kg;
    const double area = 0.5 * ((x[1] - x[0]).x() * (x[2] - x[0]).y() - (x[2] - x[0]).x() * (x[1] - x[0]).y());
    const Eigen::Matrix<double, 2, 3> g = shape_gradients(x);
    Eigen::Matrix2d nhat;
    nhat << n(0), n(2), n(2), n(1);
    const Eigen::Matrix3d base = area * g.transpose() * nhat * g;
    const double rot = thickness * thickness / 24.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            kg(kNodeDofs * i + W, kNodeDofs * j + W) = base(i, j);
            kg(kNodeDofs * i + ThetaX, kNodeDofs * j + ThetaX) = rot * base(i, j);
            kg(kNodeDofs * i + ThetaY, kNodeDofs * j + ThetaY) = rot * base(i, j);
        }
    }
    return kg;
}

ElementResultants element_resultants(const ElementMatrices& op, const SectionStiffness& sec, const Vector15& dofs) {
    const Eigen::Vector3d ep = op.Bp_bar * dofs;
    const Eigen::Vector3d eb = op.Bb_bar * dofs;
    ElementResultants r;
    r.N = sec.A * ep + sec.B * eb - sec.Nth;
    r.M = sec.B * ep + sec.D * eb - sec.Mth;
    r.Q = sec.Es * (op.Bs_bar * dofs);
    return r;
}

}  // namespace plates
