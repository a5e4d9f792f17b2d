#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "disckit/polynomial.hpp"
#include "disckit/errors.hpp"

using namespace disckit;

TEST_CASE("evaluation and derivatives") {
  // f(a, b) = 3 a^2 b - 2 b + 1
  Polynomial f(2, {{3.0, {2, 1}}, {-2.0, {0, 1}}, {1.0, {0, 0}}});
  Eigen::VectorXd pt(2);
  pt << 2.0, -1.0;
  CHECK(f(pt) == doctest::Approx(3 * 4 * -1 - 2 * -1 + 1));

  Polynomial fa = f.derivative(0);  // 6ab
  CHECK(fa(pt) == doctest::Approx(-12.0));
  Polynomial fb = f.derivative(1);  // 3a^2 - 2
  CHECK(fb(pt) == doctest::Approx(10.0));
  CHECK(f.degree() == 3);
  CHECK(f.constant_term() == 1.0);
}

TEST_CASE("arithmetic merges terms") {
  Polynomial a = Polynomial::variable(2, 0);
  Polynomial b = Polynomial::variable(2, 0) * 2.0;
  Polynomial s = a + b;
  CHECK(s.terms().size() == 1);
  Eigen::VectorXd pt(2);
  pt << 1.5, 0.0;
  CHECK(s(pt) == doctest::Approx(4.5));
  Polynomial zero = a - a;
  CHECK(zero.terms().empty());
  CHECK(zero(pt) == 0.0);
}

TEST_CASE("degree cap enforced") {
  CHECK_THROWS_AS(Polynomial(1, {{1.0, {5}}}), Error);
  Polynomial sq(1, {{1.0, {2}}});
  CHECK_THROWS_AS(sq * sq * sq, Error);
  CHECK_NOTHROW(sq * sq);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(Polynomial(2, {{1.0, {1}}}), Error);     // wrong arity
  CHECK_THROWS_AS(Polynomial(1, {{1.0, {-1}}}), Error);    // negative exponent
  Polynomial f(1, {{1.0, {1}}});
  Eigen::VectorXd bad(2);
  CHECK_THROWS_AS(f(bad), Error);
}

TEST_CASE("complex polynomial evaluation") {
  using namespace std::complex_literals;
  // g(z1, z2) = z1^2 - (0.3 + 0i)
  ComplexPolynomial g(2, {{1.0, {2, 0}}, {std::complex<double>(-0.3, 0.0), {0, 0}}});
  Eigen::VectorXcd z(2);
  z << std::complex<double>(0.0, 1.0), std::complex<double>(2.0, 0.0);
  CHECK(std::abs(g(z) - std::complex<double>(-1.3, 0.0)) < 1e-15);
}
