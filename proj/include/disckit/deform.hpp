#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "disckit/bishop.hpp"
#include "disckit/disc.hpp"
#include "disckit/manifold.hpp"

namespace disckit {

struct DeformOptions {
  double chi_halfwidth = std::numbers::pi / 8.0;  // support radius of chi about theta = pi
  double kappa_radius = 0.1;                      // clip radius of the normal profile
  double mu_radius = 0.2;                         // bump radius around (w(-1), x(-1))
};

/// One-parameter normal deformations of a graphed manifold:
/// y = H(w, x, t) = h(w, x) + kappa(t) mu(w, x), localized near the base
/// disc's point A(-1), with a boundary bump chi supported near zeta = -1,
/// vanishing near zeta = 1, and normalized so that J(chi) = 1.
class DeformedGraph {
 public:
  DeformedGraph(const GenericManifold& base, const AnalyticDisc& base_disc,
                const DeformOptions& opts = {});

  const GenericManifold& base() const { return *base_; }
  const CircleFunction& chi() const { return chi_; }

  /// Identity profile smoothly clipped at kappa_radius.
  Eigen::VectorXd kappa(const Eigen::VectorXd& t) const;
  /// Product bump in the chart coordinates, equal to 1 at the anchor.
  double mu(const Eigen::VectorXcd& w, const Eigen::VectorXd& x) const;
  Eigen::VectorXd mu_values(const Eigen::MatrixXcd& w, const Eigen::MatrixXd& x) const;

  /// Boundary graph y = h + kappa(t chi(node)) mu for the Bishop solver.
  GraphFn graph(const Eigen::VectorXd& t) const;

 private:
  const GenericManifold* base_;
  CircleFunction chi_;
  Eigen::VectorXcd w_anchor_;
  Eigen::VectorXd x_anchor_;
  DeformOptions opts_;
};

/// C-infinity cutoff: 1 for s <= 1/2, 0 for s >= 1, monotone between.
double smooth_cutoff(double s);

struct GMatrixResult {
  CircleFunction g;       // real q x q with G(1) = I
  double residual;        // sup-norm of G - I - T1(G Hx o A)
  int iterations;
};

/// Solve G = I + T1(G Hx o A) by damped Picard iteration.
GMatrixResult solve_g_matrix(const AnalyticDisc& A, const GenericManifold& M,
                             const BishopOptions& opts = {});

struct NormalDerivativeResult {
  Eigen::VectorXd d0;              // normal derivative of the base disc
  Eigen::MatrixXd d_prime;         // finite-difference Jacobian at t = 0
  Eigen::VectorXd singular_values;
  int rank = 0;
  Eigen::MatrixXd j_formula;       // columns J(G chi H_{t_j} o A)
  double max_cross_error = 0.0;    // worst difference between the two routes
};

/// The mapping t -> Pi(-dA_t/dzeta (1)) in the y_1..y_q coordinates of
/// T_0 C^n / T_0 M, its finite-difference Jacobian at 0, and the independent
/// J-functional evaluation of the same Jacobian.
NormalDerivativeResult normal_derivative_map(const AnalyticDisc& A, const DeformedGraph& dg,
                                             double step = 1e-4, const BishopOptions& opts = {});

/// Finite-difference t_j derivatives (Xdot, Ydot) of the deformed boundary.
std::pair<CircleFunction, CircleFunction> boundary_t_derivative(const AnalyticDisc& A,
                                                                const DeformedGraph& dg, int j,
                                                                double step = 1e-4,
                                                                const BishopOptions& opts = {});

/// Graph v_1 = k(u_1, w_2..w_p, x) of the auxiliary hypersurface K, with
/// k(0) = 0, dk(0) = 0; variables ordered (u_1, u_2, v_2, .., u_p, v_p, x).
class KGraph {
 public:
  KGraph(int p, int q, Polynomial k);
  static KGraph trivial(int p, int q);  // k = 0: K = {v_1 = 0}

  int p() const { return p_; }
  int q() const { return q_; }
  double v1(double u1, const Eigen::VectorXcd& w_rest, const Eigen::VectorXd& x) const;

 private:
  int p_, q_;
  Polynomial k_;
};

/// Parameters of the three-parameter family A_{t, tau, a, p0}.
struct FamilyParams {
  Eigen::VectorXd t;        // R^q, normal deformation
  double tau = 0.0;         // rotation of w_1
  Eigen::VectorXcd a;       // C^{p-1} translations of w_2..w_p
  double u1 = 0.0;          // p0 coordinates on K ...
  Eigen::VectorXcd w_rest;  // ... (w_2^0, .., w_p^0)
  Eigen::VectorXd x0;       // ... base offset in R^q

  static FamilyParams zero(int p, int q);
};

struct FamilyBounds {
  double t_max = 0.05;
  double tau_max = 0.5;
  double a_max = 0.05;
  double p0_max = 0.05;
};

/// The disc A_{t,tau,a,p0}: w_1 rotated and moved to u_1 + i k(p0),
/// w_2..w_p translated by a_j (zeta - 1) + w_j^0, x solved on the deformed
/// graph with offset x0. At zero parameters this reproduces A exactly.
/// dg may be null when no normal deformation is available; t must then be 0.
AnalyticDisc build_family(const AnalyticDisc& A, const GenericManifold& M,
                          const DeformedGraph* dg, const KGraph& K, const FamilyParams& par,
                          const FamilyBounds& bounds = {}, const BishopOptions& opts = {});

struct ParamBox {
  double t_extent = 0.0;
  int t_count = 1;  // grid points per t axis (1 means {0})
  double tau_extent = 0.0;
  int tau_count = 1;
  double a_extent = 0.0;
  int a_count = 1;  // per real/imaginary axis of each a_j
  double p0_u1_extent = 0.0;
  int p0_u1_count = 1;
  double p0_w_extent = 0.0;   // per real/imaginary axis of each w_j^0, j >= 2
  int p0_w_count = 1;
  double p0_x_extent = 0.0;
  int p0_x_count = 1;
};

struct ZetaArc {
  double rho_min = 0.80;
  double rho_max = 0.98;
  int rho_count = 3;
  double angle = 0.25;  // |arg zeta| bound
  int angle_count = 3;
};

struct WedgeOptions {
  FamilyBounds bounds;
  BishopOptions bishop;
  double cone_margin = 1e-6;       // strict-interiority margin for v0
  double n_tolerance = 1e-9;       // membership threshold for p0 in N
  double attach_tolerance = 1e-9;  // required solve residual per disc
};

struct FamilyDisc {
  FamilyParams params;
  AnalyticDisc disc;
  bool p0_in_n = false;
  int subbox = 0;  // 1 or 2 when tau falls in one of the labeled sub-boxes
};

struct WedgePoint {
  int disc_index;
  cd zeta;
  Eigen::VectorXcd z;
  bool p0_in_n = false;
  int subbox = 0;
};

struct ConeFit {
  Eigen::MatrixXd directions;  // unit rows in chart coordinates of T_0 M
  int rank = 0;
  bool v0_inside = false;
  double margin = 0.0;
};

struct WedgeSample {
  Eigen::VectorXd v0;               // chart coordinates of d/dtheta A(1)
  Eigen::MatrixXd directions;       // rows: d/dtheta A_{t,tau,a}(1) over the box
  ConeFit cone;                     // fit to the full direction cloud
  ConeFit cone_sub1, cone_sub2;     // fits to the labeled tau sub-boxes
  bool subcones_disjoint = false;
  std::vector<FamilyDisc> discs;    // the point-generating discs (with p0)
  std::vector<WedgePoint> points;
};

/// Direction cloud of d/dtheta A_{t,tau,a}(1) over the box, cone fit with the
/// strict-interiority check on v0, and the point cloud A_{t,tau,a,p0}(zeta)
/// over the p0 grid and the zeta arc. Passing dg = nullptr disables the
/// normal deformation (t frozen at 0). The direction cloud must span the
/// full tangent space, otherwise the E-rank error fires.
WedgeSample sample_wedge(const AnalyticDisc& A, const GenericManifold& M,
                         const DeformedGraph* dg, const KGraph& K, const Submanifold* N,
                         const ParamBox& box, const ZetaArc& arc, const WedgeOptions& opts = {});

}  // namespace disckit
