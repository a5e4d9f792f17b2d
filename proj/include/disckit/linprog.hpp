#pragma once

#include <Eigen/Dense>

namespace disckit {

/// Phase-1 simplex value for the system  dirs * x = target, x >= 0: zero
/// (within round-off) exactly when target lies in the conic hull of the
/// columns of dirs. Deterministic (Bland's rule).
double conic_fit_residual(const Eigen::MatrixXd& dirs, const Eigen::VectorXd& target);

/// Membership of target in the conic hull of the columns of dirs.
bool in_conic_hull(const Eigen::MatrixXd& dirs, const Eigen::VectorXd& target,
                   double tol = 1e-9);

}  // namespace disckit
