#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace disckit {

/// Hard cap on the degree of manifold and submanifold data: derivatives are
/// taken symbolically, so everything downstream is free of differentiation
/// error.
inline constexpr int kMaxPolyDegree = 4;

/// Real multivariate polynomial, sparse monomial representation.
class Polynomial {
 public:
  struct Term {
    double coef = 0.0;
    std::vector<int> expo;  // one exponent per variable
  };

  Polynomial(int nvars, std::vector<Term> terms);
  static Polynomial zero(int nvars) { return Polynomial(nvars, {}); }
  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int index);
  static Polynomial monomial(int nvars, double coef, std::vector<int> expo);

  int nvars() const { return nvars_; }
  int degree() const;
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(const Eigen::VectorXd& point) const;
  Polynomial derivative(int var) const;
  double constant_term() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  /// Product; throws if the result would exceed kMaxPolyDegree.
  Polynomial operator*(const Polynomial& o) const;

 private:
  int nvars_;
  std::vector<Term> terms_;  // kept sorted by exponent vector, coefficients merged
  void normalize();
};

/// Holomorphic polynomial in the coordinates of C^n (no conjugates), used for
/// the closed-form scenario functions.
class ComplexPolynomial {
 public:
  struct Term {
    std::complex<double> coef;
    std::vector<int> expo;
  };

  ComplexPolynomial(int nvars, std::vector<Term> terms);
  static ComplexPolynomial constant(int nvars, std::complex<double> c);
  static ComplexPolynomial variable(int nvars, int index);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::complex<double> operator()(const Eigen::VectorXcd& z) const;

 private:
  int nvars_;
  std::vector<Term> terms_;
};

}  // namespace disckit
