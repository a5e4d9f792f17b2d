#pragma once

#include <Eigen/Dense>

#include "disckit/circle.hpp"
#include "disckit/manifold.hpp"

namespace disckit {

/// Boundary data of an analytic disc attached to a graphed manifold (possibly
/// a deformed one): prescribed holomorphic w-component, solved x-component and
/// graph values y. The interior is recovered spectrally from the nonnegative
/// Fourier modes.
class AnalyticDisc {
 public:
  AnalyticDisc(CircleFunction w, CircleFunction x, CircleFunction y, double residual);

  const CircleGrid& grid() const { return w_.grid(); }
  int p() const { return w_.rows(); }
  int q() const { return x_.rows(); }
  int n() const { return p() + q(); }

  const CircleFunction& w_boundary() const { return w_; }
  const CircleFunction& x_component() const { return x_; }
  const CircleFunction& y_component() const { return y_; }
  /// z-component boundary values x + i y (holomorphic up to the residual).
  CircleFunction z_boundary() const;
  /// All components as one complex-vector circle function (w then z).
  CircleFunction boundary() const;

  Eigen::VectorXcd boundary_point(int node) const;
  Eigen::MatrixXcd boundary_points() const;  // grid.size() x n
  Eigen::VectorXcd base_point() const { return boundary_point(0); }

  /// Interior evaluation at |zeta| < 1 (power series of the boundary data).
  Eigen::VectorXcd eval(cd zeta) const;

  /// d/dtheta at theta = 0 of all components; a tangent vector of M at A(1).
  Eigen::VectorXcd theta_derivative_at_one() const;
  /// d/dzeta at zeta = 1 (nonnegative modes).
  Eigen::VectorXcd zeta_derivative_at_one() const;

  /// Sup-norm of x + T1 y - x(1): the Bishop-equation residual.
  double residual() const { return residual_; }

  /// Largest relative negative-mode content over the z-components.
  double holomorphy_defect() const;

  /// Diameter of the boundary image (constant-disc detection).
  double boundary_diameter() const;

  /// sup over grid nodes of |r(A(zeta))| with respect to M; meaningful for
  /// discs attached to the undeformed manifold.
  double attachment_residual(const GenericManifold& M) const;

 private:
  CircleFunction w_, x_, y_;
  double residual_;
};

}  // namespace disckit
