#pragma once

#include <functional>

#include <Eigen/Dense>

#include "disckit/circle.hpp"

namespace disckit {

/// Truncated Taylor expansion of a holomorphic function about a center in
/// C^n, dense tensor storage with per-variable degree <= degree(). Germs are
/// the transport mechanism of the continuity principle: they are seeded from
/// direct Cauchy data where the function is known and re-expanded (shifted)
/// across overlapping polydiscs elsewhere.
class TaylorGerm {
 public:
  TaylorGerm(Eigen::VectorXcd center, int degree);

  /// Tensor-product Cauchy integral on the polydisc of radius rho about
  /// center; f must be holomorphic there. quadrature points per axis must
  /// exceed the degree comfortably.
  static TaylorGerm from_function(const std::function<cd(const Eigen::VectorXcd&)>& f,
                                  const Eigen::VectorXcd& center, int degree, double rho,
                                  int quadrature = 24);

  int nvars() const { return static_cast<int>(center_.size()); }
  int degree() const { return degree_; }
  const Eigen::VectorXcd& center() const { return center_; }

  cd eval(const Eigen::VectorXcd& z) const;

  /// Exact polynomial re-expansion about a new center.
  TaylorGerm shifted(const Eigen::VectorXcd& new_center) const;

  /// Size of the top-degree band at radius rho; a convergence proxy. A germ
  /// transported beyond its radius shows a non-decaying band.
  double band_norm(int band, double rho) const;
  bool looks_divergent(double rho, double ratio = 1e-2) const;

  cd coeff(const std::vector<int>& alpha) const;
  cd& coeff_ref(const std::vector<int>& alpha);

 private:
  Eigen::VectorXcd center_;
  int degree_;
  std::vector<cd> coef_;  // index sum_l alpha_l * (degree+1)^l

  int flat_index(const std::vector<int>& alpha) const;
};

}  // namespace disckit
