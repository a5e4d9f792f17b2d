#include "disckit/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "disckit/errors.hpp"

namespace disckit {

namespace {

int term_degree(const std::vector<int>& expo) {
  return std::accumulate(expo.begin(), expo.end(), 0);
}

double power(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

std::complex<double> cpower(std::complex<double> base, int e) {
  std::complex<double> r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Polynomial::Polynomial(int nvars, std::vector<Term> terms)
    : nvars_(nvars), terms_(std::move(terms)) {
  if (nvars_ <= 0) throw_config("bad-polynomial", "polynomial needs at least one variable");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.expo.size()) != nvars_)
      throw_config("bad-polynomial", "exponent vector length does not match variable count");
    for (int e : t.expo)
      if (e < 0) throw_config("bad-polynomial", "negative exponent");
    if (term_degree(t.expo) > kMaxPolyDegree)
      throw_config("degree-too-high",
                   "polynomial degree exceeds " + std::to_string(kMaxPolyDegree));
  }
  normalize();
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.expo < b.expo; });
  std::vector<Term> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().expo == t.expo)
      merged.back().coef += t.coef;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  terms_ = std::move(merged);
}

Polynomial Polynomial::constant(int nvars, double c) {
  return Polynomial(nvars, {Term{c, std::vector<int>(nvars, 0)}});
}

Polynomial Polynomial::variable(int nvars, int index) {
  std::vector<int> e(nvars, 0);
  e.at(index) = 1;
  return Polynomial(nvars, {Term{1.0, std::move(e)}});
}

Polynomial Polynomial::monomial(int nvars, double coef, std::vector<int> expo) {
  return Polynomial(nvars, {Term{coef, std::move(expo)}});
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, term_degree(t.expo));
  return d;
}

double Polynomial::operator()(const Eigen::VectorXd& point) const {
  if (point.size() != nvars_)
    throw_config("bad-polynomial", "evaluation point has wrong dimension");
  double s = 0.0;
  for (const auto& t : terms_) {
    double m = t.coef;
    for (int v = 0; v < nvars_; ++v) m *= power(point(v), t.expo[v]);
    s += m;
  }
  return s;
}

Polynomial Polynomial::derivative(int var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.expo[var] == 0) continue;
    Term d = t;
    d.coef *= d.expo[var];
    d.expo[var] -= 1;
    out.push_back(std::move(d));
  }
  return Polynomial(nvars_, std::move(out));
}

double Polynomial::constant_term() const {
  for (const auto& t : terms_)
    if (term_degree(t.expo) == 0) return t.coef;
  return 0.0;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw_config("bad-polynomial", "variable count mismatch");
  std::vector<Term> t = terms_;
  t.insert(t.end(), o.terms_.begin(), o.terms_.end());
  return Polynomial(nvars_, std::move(t));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(double s) const {
  std::vector<Term> t = terms_;
  for (auto& term : t) term.coef *= s;
  return Polynomial(nvars_, std::move(t));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw_config("bad-polynomial", "variable count mismatch");
  std::vector<Term> t;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      Term p;
      p.coef = a.coef * b.coef;
      p.expo.resize(nvars_);
      for (int v = 0; v < nvars_; ++v) p.expo[v] = a.expo[v] + b.expo[v];
      t.push_back(std::move(p));
    }
  return Polynomial(nvars_, std::move(t));
}

ComplexPolynomial::ComplexPolynomial(int nvars, std::vector<Term> terms)
    : nvars_(nvars), terms_(std::move(terms)) {
  if (nvars_ <= 0) throw_config("bad-polynomial", "polynomial needs at least one variable");
  for (const auto& t : terms_)
    if (static_cast<int>(t.expo.size()) != nvars_)
      throw_config("bad-polynomial", "exponent vector length does not match variable count");
}

ComplexPolynomial ComplexPolynomial::constant(int nvars, std::complex<double> c) {
  return ComplexPolynomial(nvars, {Term{c, std::vector<int>(nvars, 0)}});
}

ComplexPolynomial ComplexPolynomial::variable(int nvars, int index) {
  std::vector<int> e(nvars, 0);
  e.at(index) = 1;
  return ComplexPolynomial(nvars, {Term{1.0, std::move(e)}});
}

std::complex<double> ComplexPolynomial::operator()(const Eigen::VectorXcd& z) const {
  if (z.size() != nvars_) throw_config("bad-polynomial", "evaluation point has wrong dimension");
  std::complex<double> s = 0.0;
  for (const auto& t : terms_) {
    std::complex<double> m = t.coef;
    for (int v = 0; v < nvars_; ++v) m *= cpower(z(v), t.expo[v]);
    s += m;
  }
  return s;
}

}  // namespace disckit
