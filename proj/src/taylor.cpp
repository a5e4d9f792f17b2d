#include "disckit/taylor.hpp"

#include <cmath>
#include <numbers>

#include "disckit/errors.hpp"

namespace disckit {

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

TaylorGerm::TaylorGerm(Eigen::VectorXcd center, int degree)
    : center_(std::move(center)), degree_(degree) {
  if (degree_ < 0 || center_.size() == 0)
    throw_config("bad-germ", "germ needs a positive dimension and degree");
  coef_.assign(ipow(degree_ + 1, nvars()), cd(0, 0));
}

int TaylorGerm::flat_index(const std::vector<int>& alpha) const {
  int idx = 0, stride = 1;
  for (int l = 0; l < nvars(); ++l) {
    idx += alpha[l] * stride;
    stride *= degree_ + 1;
  }
  return idx;
}

cd TaylorGerm::coeff(const std::vector<int>& alpha) const { return coef_[flat_index(alpha)]; }
cd& TaylorGerm::coeff_ref(const std::vector<int>& alpha) { return coef_[flat_index(alpha)]; }

TaylorGerm TaylorGerm::from_function(const std::function<cd(const Eigen::VectorXcd&)>& f,
                                     const Eigen::VectorXcd& center, int degree, double rho,
                                     int quadrature) {
  const int n = static_cast<int>(center.size());
  if (quadrature <= 2 * degree)
    throw_config("bad-germ", "quadrature order must exceed twice the germ degree");
  if (rho <= 0.0) throw_config("bad-germ", "Cauchy radius must be positive");

  const int m = quadrature;
  const double two_pi = 2.0 * std::numbers::pi;
  // sample f on the torus center + rho * e^{i theta}
  std::vector<cd> data(ipow(m, n));
  std::vector<int> j(n, 0);
  Eigen::VectorXcd z(n);
  for (long long flat = 0; flat < static_cast<long long>(data.size()); ++flat) {
    long long rem = flat;
    for (int l = 0; l < n; ++l) {
      j[l] = static_cast<int>(rem % m);
      rem /= m;
    }
    for (int l = 0; l < n; ++l)
      z(l) = center(l) + rho * std::polar(1.0, two_pi * j[l] / m);
    data[flat] = f(z);
  }

  // separable DFT, axis by axis, keeping orders 0..degree and dividing by
  // rho^alpha as we go
  std::vector<cd> twiddle(m);
  for (int k = 0; k < m; ++k) twiddle[k] = std::polar(1.0, -two_pi * k / m);
  TaylorGerm germ(center, degree);
  std::vector<cd> cur = std::move(data);
  std::vector<long long> extents(n, m);
  for (int axis = 0; axis < n; ++axis) {
    std::vector<long long> new_extents = extents;
    new_extents[axis] = degree + 1;
    long long out_size = 1;
    for (long long e : new_extents) out_size *= e;
    std::vector<cd> next(out_size, cd(0, 0));

    long long stride_in = 1, stride_out = 1;
    for (int l = 0; l < axis; ++l) {
      stride_in *= extents[l];
      stride_out *= new_extents[l];
    }
    long long outer_in = 1, outer_out = 1;
    for (int l = axis + 1; l < n; ++l) {
      outer_in *= extents[l];
      outer_out *= new_extents[l];
    }
    (void)outer_out;

    long long block_in = stride_in * extents[axis];
    long long block_out = stride_out * new_extents[axis];
    for (long long o = 0; o < outer_in; ++o) {
      for (long long i = 0; i < stride_in; ++i) {
        for (int kcoef = 0; kcoef <= degree; ++kcoef) {
          cd acc = 0.0;
          for (int jj = 0; jj < m; ++jj)
            acc += cur[o * block_in + jj * stride_in + i] * twiddle[(kcoef * jj) % m];
          next[o * block_out + kcoef * stride_out + i] =
              acc / (static_cast<double>(m) * std::pow(rho, kcoef));
        }
      }
    }
    cur = std::move(next);
    extents = new_extents;
  }
  germ.coef_ = std::move(cur);
  return germ;
}

cd TaylorGerm::eval(const Eigen::VectorXcd& z) const {
  const int n = nvars();
  Eigen::VectorXcd d = z - center_;
  // Horner along the last axis first, collapsing one dimension at a time
  std::vector<cd> cur = coef_;
  long long size = static_cast<long long>(cur.size());
  for (int axis = n - 1; axis >= 0; --axis) {
    long long new_size = size / (degree_ + 1);
    std::vector<cd> next(new_size);
    for (long long i = 0; i < new_size; ++i) {
      cd acc = 0.0;
      for (int k = degree_; k >= 0; --k) acc = acc * d(axis) + cur[k * new_size + i];
      next[i] = acc;
    }
    cur = std::move(next);
    size = new_size;
  }
  return cur[0];
}

TaylorGerm TaylorGerm::shifted(const Eigen::VectorXcd& new_center) const {
  const int n = nvars();
  Eigen::VectorXcd delta = new_center - center_;
  TaylorGerm out(new_center, degree_);
  out.coef_ = coef_;
  // per-axis binomial shift: c'[b] = sum_{k >= b} C(k, b) delta^{k-b} c[k]
  long long total = static_cast<long long>(out.coef_.size());
  for (int axis = 0; axis < n; ++axis) {
    long long stride = ipow(degree_ + 1, axis);
    long long reps = total / ((degree_ + 1) * stride);
    for (long long rep = 0; rep < reps; ++rep) {
      for (long long i = 0; i < stride; ++i) {
        long long base = rep * (degree_ + 1) * stride + i;
        std::vector<cd> line(degree_ + 1);
        for (int k = 0; k <= degree_; ++k) line[k] = out.coef_[base + k * stride];
        for (int b = 0; b <= degree_; ++b) {
          cd acc = 0.0;
          cd dp = 1.0;
          for (int k = b; k <= degree_; ++k) {
            acc += binomial(k, b) * dp * line[k];
            dp *= delta(axis);
          }
          out.coef_[base + b * stride] = acc;
        }
      }
    }
  }
  return out;
}

double TaylorGerm::band_norm(int band, double rho) const {
  const int n = nvars();
  double s = 0.0;
  long long total = static_cast<long long>(coef_.size());
  for (long long flat = 0; flat < total; ++flat) {
    long long rem = flat;
    int maxdeg = 0;
    for (int l = 0; l < n; ++l) {
      int a = static_cast<int>(rem % (degree_ + 1));
      rem /= degree_ + 1;
      maxdeg = std::max(maxdeg, a);
    }
    if (maxdeg == band) s += std::abs(coef_[flat]) * std::pow(rho, band);
  }
  return s;
}

bool TaylorGerm::looks_divergent(double rho, double ratio) const {
  double low = band_norm(0, rho) + band_norm(1, rho);
  double high = band_norm(degree_, rho) + band_norm(degree_ - 1, rho);
  return high > ratio * std::max(low, 1e-300);
}

}  // namespace disckit
