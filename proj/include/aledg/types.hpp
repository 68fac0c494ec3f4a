#pragma once

#include <Eigen/Dense>

namespace aledg {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Conserved state (rho, rho*u, rho*v, rho*E).
using State = Eigen::Vector4d;

/// Gradient of the conserved state; column d holds d/dx_d.
using StateGrad = Eigen::Matrix<double, 4, 2>;

/// Flux tensor; columns are the x- and y-flux of the conserved state.
using FluxTensor = Eigen::Matrix<double, 4, 2>;

/// Per-cell coefficient block: one row per basis function / subcell,
/// one column per conserved variable.
using Coeffs = Eigen::Matrix<double, Eigen::Dynamic, 4>;
using Coeffs2 = Eigen::Matrix<double, Eigen::Dynamic, 2>;

}  // namespace aledg
