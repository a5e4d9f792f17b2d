#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "disckit/circle.hpp"
#include "disckit/polynomial.hpp"

namespace disckit {

/// Chart variables of a graphed manifold are ordered (u_1..u_p, v_1..v_p,
/// x_1..x_q) with w = u + iv; ambient real coordinates append (y_1..y_q).
/// Points of C^n are ordered (w_1..w_p, z_1..z_q).

Eigen::VectorXd ambient_real(const Eigen::VectorXcd& z, int p, int q);
Eigen::VectorXcd ambient_complex(const Eigen::VectorXd& r, int p, int q);
Eigen::VectorXd chart_of(const Eigen::VectorXcd& z, int p, int q);  // (u, v, x)
Eigen::VectorXd apply_j(const Eigen::VectorXd& r, int p, int q);    // multiplication by i

/// Generic manifold M = {y = h(w, x)} in C^n, h polynomial with
/// h(0) = dh(0) = 0, CR dimension p >= 1, codimension q >= 1.
class GenericManifold {
 public:
  GenericManifold(int p, int q, std::vector<Polynomial> h,
                  Eigen::VectorXcd base_point = Eigen::VectorXcd());

  int p() const { return p_; }
  int q() const { return q_; }
  int n() const { return p_ + q_; }
  const std::vector<Polynomial>& h() const { return h_; }
  const Eigen::VectorXcd& base_point() const { return base_point_; }

  Eigen::VectorXd h_eval(const Eigen::VectorXd& uvx) const;
  /// q x (2p+q) Jacobian of h in the chart variables.
  Eigen::MatrixXd h_jacobian(const Eigen::VectorXd& uvx) const;

  /// Defining function r(z) = y - h(w, x); zero iff z lies on M.
  Eigen::VectorXd eval_r(const Eigen::VectorXcd& z) const;

  /// Wirtinger gradient of r, the q x n matrix with 2 Re(r_z(z) Zhat) equal to
  /// the differential of r along the complex displacement Zhat.
  Eigen::MatrixXcd r_z(const Eigen::VectorXcd& z) const;

  /// Lift chart coordinates to the point (w, x + i h(w,x)) of M.
  Eigen::VectorXcd point_on_m(const Eigen::VectorXd& uvx) const;

  /// Real basis of T_zM as a 2n x (2p+q) matrix (ambient real coordinates).
  Eigen::MatrixXd tangent_basis(const Eigen::VectorXcd& z) const;

  /// Real basis of the complex tangent space T^c_zM, 2n x 2p.
  Eigen::MatrixXd complex_tangent_basis(const Eigen::VectorXcd& z) const;

  /// Vectorized graph evaluation over circle samples (one node per row).
  Eigen::MatrixXd h_values(const Eigen::MatrixXcd& w, const Eigen::MatrixXd& x) const;

  /// H_x along a boundary: q x q matrix-valued circle function.
  CircleFunction hx_function(const CircleGrid& g, const Eigen::MatrixXcd& w,
                             const Eigen::MatrixXd& x) const;

  /// r_z along a boundary: q x n complex matrix-valued circle function.
  CircleFunction rz_function(const CircleGrid& g, const Eigen::MatrixXcd& points) const;

 private:
  int p_, q_;
  std::vector<Polynomial> h_;
  Eigen::VectorXcd base_point_;
  std::vector<std::vector<Polynomial>> dh_;  // dh_[j][var], var over chart variables
};

struct DefiningData {
  Eigen::MatrixXcd rz0;              // q x n at the base point
  Eigen::MatrixXcd D;                // n x q right inverse, rz0 * D = I
  Eigen::VectorXd singular_values;   // of rz0, genericity evidence
};

/// Right-inverse data of Lemma-1.1 type; throws "not-generic" when r_z at the
/// base point drops rank.
DefiningData build_defining_data(const GenericManifold& M);

/// Submanifold of M cut out by extra polynomial equations in the chart
/// variables (u, v, x); codimension in M between 1 and 3.
class Submanifold {
 public:
  Submanifold(const GenericManifold& M, std::vector<Polynomial> equations);

  int codim_in_m() const { return static_cast<int>(equations_.size()); }
  const std::vector<Polynomial>& equations() const { return equations_; }

  Eigen::VectorXd eval(const Eigen::VectorXcd& z) const;
  Eigen::VectorXd eval_chart(const Eigen::VectorXd& uvx) const;
  /// codim x (2p+q) matrix of equation gradients in chart variables.
  Eigen::MatrixXd gradients(const Eigen::VectorXcd& z) const;

  /// Norm of the equation vector; cheap proxy for the distance to N.
  double clearance(const Eigen::VectorXcd& z) const { return eval(z).norm(); }

  int p() const { return p_; }
  int q() const { return q_; }

 private:
  int p_, q_;
  std::vector<Polynomial> equations_;
  std::vector<std::vector<Polynomial>> grads_;
};

struct TangencyReport {
  bool contains_complex_tangent = false;
  /// Witness direction in T^c_zM \ T_zN when the inclusion fails.
  std::optional<Eigen::VectorXcd> witness;
  double violation = 0.0;          // largest singular value of the inclusion test
  bool degenerate_warning = false; // decision fell within 10x of the threshold
};

/// Decides whether T_zN contains T^c_zM. z must lie on M and N within 1e-8.
TangencyReport tangency_check(const Submanifold& N, const GenericManifold& M,
                              const Eigen::VectorXcd& z, double threshold = 1e-8);

}  // namespace disckit
