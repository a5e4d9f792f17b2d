#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "disckit/disc.hpp"
#include "disckit/manifold.hpp"

namespace disckit {

struct BishopOptions {
  double tol = 1e-11;       // sup-norm residual target
  int max_iter = 200;
  double damping = 1.0;     // halved whenever the residual increases
  double trust_radius = 1.0;  // sup-norm bound on x iterates
  Eigen::MatrixXd initial_guess;  // empty: constant x0
};

/// Vectorized boundary graph: returns y with y.row(j) = H(w(j), x(j), node j).
/// An empty function means the plain graph y = h(w, x).
using GraphFn =
    std::function<Eigen::MatrixXd(const Eigen::MatrixXcd& w, const Eigen::MatrixXd& x)>;

/// Solve x = -T1[ H(w, x, .) ] + x0 by damped Picard iteration. w is the
/// prescribed holomorphic boundary component (negative modes below 1e-10).
AnalyticDisc solve_bishop(const GenericManifold& M, const CircleFunction& w,
                          const Eigen::VectorXd& x0, const BishopOptions& opts = {},
                          const GraphFn& graph = {});

/// w-component c(1-zeta) in the first coordinate, zero elsewhere.
CircleFunction section2_w(const CircleGrid& g, int p, double c);

struct Section2Disc {
  AnalyticDisc disc;
  std::vector<double> crossings;  // boundary angles where A meets M1
};

/// The explicit small disc of the good-disc construction, together with its
/// boundary intersections with a one-codimensional M1 through the base point.
/// Exactly two crossings are required, one of them at theta = 0.
Section2Disc build_section2_disc(const GenericManifold& M, const Submanifold& M1, double c,
                                 const BishopOptions& opts = {}, CircleGrid grid = CircleGrid());

/// Boundary angles where the scalar circle function vanishes; node hits plus
/// sign-change bracketing refined by bisection on the trigonometric
/// interpolant (tolerance 1e-10 in theta).
std::vector<double> boundary_zeros(const CircleFunction& values);

struct GoodDiscOptions {
  BishopOptions bishop;
  CircleGrid grid = CircleGrid();
  int budget = 200;           // perturbation attempts
  double clearance = 1e-6;    // required min distance of the boundary to N
  double exclusion_arc = 0.2; // |theta| below this is exempt from the clearance check
  double direction_threshold = 1e-6;  // non-tangency margin for v0
  unsigned seed = 1;
};

struct GoodDiscResult {
  AnalyticDisc disc;
  std::vector<double> crossings;
  double n_clearance = 0.0;             // achieved min distance to N away from 1
  Eigen::VectorXcd v0;                  // d/dtheta A at 1
  double v0_tc_margin = 0.0;            // distance of v0 from T^c, relative
  double v0_tn_margin = 0.0;            // distance of v0 from T_{z0}N, relative
  Eigen::VectorXd perturbation;         // w-parameters of the returned disc
};

/// Search the w-parameter slice around the section-2 disc for a disc through
/// z0 whose boundary avoids N away from zeta = 1 and whose boundary tangent
/// at 1 avoids both T^c M and T_{z0} N.
GoodDiscResult find_good_disc(const GenericManifold& M, const Submanifold& N,
                              const Submanifold& M1, double c, double delta,
                              const GoodDiscOptions& opts = {});

/// Finite-dimensional slice of the attached-disc family around a base disc.
struct DiscFamily {
  int nparams = 0;
  std::function<AnalyticDisc(const Eigen::VectorXd&)> solve;
};

/// Family fixing A(1): w_j += a_{jk} (zeta^k - 1), k = 1..harmonics, with the
/// real and imaginary parts of a as parameters (2 p harmonics of them).
DiscFamily w_harmonic_family(const GenericManifold& M, const CircleFunction& base_w,
                             const Eigen::VectorXd& x0, int harmonics,
                             const BishopOptions& opts = {}, const GraphFn& graph = {});

/// Central finite-difference Jacobian of an observable over a family.
Eigen::MatrixXd disc_jacobian(const DiscFamily& family,
                              const std::function<Eigen::VectorXd(const AnalyticDisc&)>& observable,
                              double step = 1e-5);

/// A(zeta_node) as an ambient real vector.
std::function<Eigen::VectorXd(const AnalyticDisc&)> evaluation_observable(int node);
/// d/dtheta A at 1 as an ambient real vector.
std::function<Eigen::VectorXd(const AnalyticDisc&)> direction_observable();

/// Real basis of T_zN inside T_zM, ambient coordinates.
Eigen::MatrixXd submanifold_tangent_basis(const Submanifold& N, const GenericManifold& M,
                                          const Eigen::VectorXcd& z);

/// Relative distance of a vector from the column span of a basis.
double subspace_distance(const Eigen::VectorXd& v, const Eigen::MatrixXd& basis);

}  // namespace disckit
