#include "disckit/linprog.hpp"

#include <cmath>
#include <vector>

namespace disckit {

// Textbook dense phase-1 simplex. The problem sizes here are tiny (a few
// hundred columns, dimension <= 9), so no factorization updates are needed.
double conic_fit_residual(const Eigen::MatrixXd& dirs, const Eigen::VectorXd& target) {
  const int m = static_cast<int>(dirs.rows());
  const int n = static_cast<int>(dirs.cols());
  if (target.size() != m) return std::numeric_limits<double>::infinity();

  // Minimize sum of artificials s:  [A | E] (x; s) = b,  x, s >= 0, with
  // E = diag(sign(b)) so that s = |b| is a basic feasible start.
  Eigen::MatrixXd tab(m, n + m + 1);
  tab.setZero();
  for (int i = 0; i < m; ++i) {
    double sgn = target(i) >= 0.0 ? 1.0 : -1.0;
    tab.row(i).head(n) = sgn * dirs.row(i);
    tab(i, n + i) = 1.0;
    tab(i, n + m) = sgn * target(i);
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  // reduced costs for objective sum(s) with the artificial basis
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + m);
  cost.tail(m).setOnes();

  auto reduced_cost = [&](int j) {
    double c = cost(j);
    for (int i = 0; i < m; ++i) c -= cost(basis[i]) * tab(i, j);
    return c;
  };

  const double eps = 1e-12;
  const int max_pivots = 50 * (n + m);
  for (int iter = 0; iter < max_pivots; ++iter) {
    // Bland: first improving column
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (reduced_cost(j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (tab(i, enter) > eps) {
        double ratio = tab(i, n + m) / tab(i, enter);
        if (ratio < best - eps || (std::abs(ratio - best) <= eps &&
                                   (leave < 0 || basis[i] < basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) break;  // unbounded cannot happen for phase 1

    tab.row(leave) /= tab(leave, enter);
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = tab(i, enter);
      if (f != 0.0) tab.row(i) -= f * tab.row(leave);
    }
    basis[leave] = enter;
  }

  double objective = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) objective += tab(i, n + m);
  return std::max(objective, 0.0);
}

bool in_conic_hull(const Eigen::MatrixXd& dirs, const Eigen::VectorXd& target, double tol) {
  double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
  return conic_fit_residual(dirs, target) <= tol * scale;
}

}  // namespace disckit
