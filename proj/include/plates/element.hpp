#pragma once

#include "plates/material.hpp"

#include <Eigen/Dense>

#include <array>

namespace plates {

/// Per-node dof order {u, v, w, theta_x, theta_y}; element dof 5*i + k.
constexpr int kNodeDofs = 5;
constexpr int kElementDofs = 15;

enum Dof : int { U = 0, V = 1, W = 2, ThetaX = 3, ThetaY = 4 };

using Matrix15 = Eigen::Matrix<double, kElementDofs, kElementDofs>;
using Vector15 = Eigen::Matrix<double, kElementDofs, 1>;
using Operator3 = Eigen::Matrix<double, 3, kElementDofs>;
using Operator2 = Eigen::Matrix<double, 2, kElementDofs>;
using Coords3 = std::array<Eigen::Vector2d, 3>;

/// Constant DSG3 strain operators of one triangle, node 1 being the reference vertex of the shear gaps.
struct SubTriangleOperators {
    Operator3 Bp = Operator3::Zero();
    Operator3 Bb = Operator3::Zero();
    Operator2 Bs = Operator2::Zero();
    double area = 0.0;
};

SubTriangleOperators dsg3_operators(const Eigen::Vector2d& v1, const Eigen::Vector2d& v2, const Eigen::Vector2d& v3);

enum class Smoothing {
    CellBased,  // CS-DSG3: three centroid subtriangles, area-averaged
    None,       // plain DSG3 on the whole element
};

struct ElementMatrices {
    Operator3 Bp_bar = Operator3::Zero();
    Operator3 Bb_bar = Operator3::Zero();
    Operator2 Bs_bar = Operator2::Zero();
    Matrix15 Ke = Matrix15::Zero();
    Matrix15 Me = Matrix15::Zero();
    Matrix15 Kge = Matrix15::Zero();
    double area = 0.0;
    double longest_edge = 0.0;
};

/// Smoothed strain operators only; the matrices are left zero.
ElementMatrices csdsg3_operators(const Coords3& coords);

ElementMatrices strain_operators(const Coords3& coords, Smoothing smoothing);

/// Optional transverse-shear stabilization E_s -> E_s h^2 / (h^2 + alpha l_e^2).
struct Stabilization {
    bool enabled = false;
    double alpha = 0.1;
};

Matrix15 element_stiffness(const ElementMatrices& ops, const SectionStiffness& sec,
                           const Stabilization& stab = {});

/// Consistent mass from linear shape functions with translational p and rotary I inertia.
Matrix15 element_mass(const Coords3& coords, const SectionStiffness& sec);

/// Linear-triangle gradients of the three shape functions: row 0 = d/dx, row 1 = d/dy.
Eigen::Matrix<double, 2, 3> shape_gradients(const Coords3& coords);

/// Geometric stiffness from in-plane resultants (Nxx, Nyy, Nxy):
/// A_e (Gw' N Gw + h^2/24 (Gtx' N Gtx + Gty' N Gty)).
Matrix15 element_geometric(const Coords3& coords, const Eigen::Vector3d& resultants, double thickness);

struct ElementResultants {
    Eigen::Vector3d N = Eigen::Vector3d::Zero();  // membrane
    Eigen::Vector3d M = Eigen::Vector3d::Zero();  // bending
    Eigen::Vector2d Q = Eigen::Vector2d::Zero();  // transverse shear
};

ElementResultants element_resultants(const ElementMatrices& ops, const SectionStiffness& sec, const Vector15& dofs);

}  // namespace plates
