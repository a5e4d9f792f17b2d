#include "disckit/circle.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace disckit {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int signed_freq(int bin, int size) { return bin < size / 2 ? bin : bin - size; }

void check_same_grid(const CircleFunction& a, const CircleFunction& b) {
  if (!(a.grid() == b.grid()))
    throw_config("grid-mismatch", "operands sampled on different grids");
}

double max_imag(const Eigen::MatrixXcd& m) { return m.imag().cwiseAbs().maxCoeff(); }

}  // namespace

CircleGrid::CircleGrid(int size) : size_(size) {
  if (!is_power_of_two(size_) || size_ < 16)
    throw_config("size-not-power-of-two",
                 "grid size must be a power of two >= 16, got " + std::to_string(size_));
}

double CircleGrid::theta(int j) const {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size_);
}

bool kind_is_real(ValueKind k) {
  return k == ValueKind::RealScalar || k == ValueKind::RealVector || k == ValueKind::RealMatrix;
}

CircleFunction::CircleFunction(CircleGrid grid, ValueKind kind, int rows, int cols,
                               Eigen::MatrixXcd samples)
    : grid_(grid), kind_(kind), rows_(rows), cols_(cols), samples_(std::move(samples)) {
  if (samples_.rows() != grid_.size() || samples_.cols() != rows_ * cols_)
    throw_config("bad-sample-shape", "sample matrix does not match grid size and value shape");
  if (is_real_kind() && samples_.size() > 0 && max_imag(samples_) > kRealTolerance)
    throw_domain("non-real-input", "real-tagged circle function has imaginary part above 1e-12");
}

CircleFunction CircleFunction::real_scalar(CircleGrid g, const Eigen::VectorXd& v) {
  return CircleFunction(g, ValueKind::RealScalar, 1, 1, v.cast<cd>());
}
CircleFunction CircleFunction::complex_scalar(CircleGrid g, const Eigen::VectorXcd& v) {
  return CircleFunction(g, ValueKind::ComplexScalar, 1, 1, v);
}
CircleFunction CircleFunction::real_vector(CircleGrid g, const Eigen::MatrixXd& v) {
  return CircleFunction(g, ValueKind::RealVector, static_cast<int>(v.cols()), 1, v.cast<cd>());
}
CircleFunction CircleFunction::complex_vector(CircleGrid g, const Eigen::MatrixXcd& v) {
  return CircleFunction(g, ValueKind::ComplexVector, static_cast<int>(v.cols()), 1, v);
}
CircleFunction CircleFunction::real_matrix(CircleGrid g, int rows, int cols,
                                           const Eigen::MatrixXcd& flat) {
  return CircleFunction(g, ValueKind::RealMatrix, rows, cols, flat);
}
CircleFunction CircleFunction::complex_matrix(CircleGrid g, int rows, int cols,
                                              const Eigen::MatrixXcd& flat) {
  return CircleFunction(g, ValueKind::ComplexMatrix, rows, cols, flat);
}

CircleFunction CircleFunction::from_theta(CircleGrid g, const std::function<double(double)>& f) {
  Eigen::VectorXd v(g.size());
  for (int j = 0; j < g.size(); ++j) v(j) = f(g.theta(j));
  return real_scalar(g, v);
}

CircleFunction CircleFunction::from_theta_complex(CircleGrid g, const std::function<cd(double)>& f) {
  Eigen::VectorXcd v(g.size());
  for (int j = 0; j < g.size(); ++j) v(j) = f(g.theta(j));
  return complex_scalar(g, v);
}

Eigen::VectorXcd CircleFunction::vector_at(int node) const {
  return samples_.row(node).transpose();
}

Eigen::MatrixXcd CircleFunction::matrix_at(int node) const {
  Eigen::VectorXcd row = samples_.row(node).transpose();
  return Eigen::Map<const Eigen::MatrixXcd>(row.data(), rows_, cols_);
}

double CircleFunction::sup_norm() const {
  if (samples_.size() == 0) return 0.0;
  return samples_.cwiseAbs().maxCoeff();
}

FourierCoefficients::FourierCoefficients(CircleGrid grid, ValueKind kind, int rows, int cols,
                                         Eigen::MatrixXcd coeffs)
    : grid_(grid), kind_(kind), rows_(rows), cols_(cols), coeffs_(std::move(coeffs)) {}

cd FourierCoefficients::coeff(int k, int comp) const {
  int n = grid_.size();
  int bin = k >= 0 ? k : k + n;
  return coeffs_(bin, comp);
}

double FourierCoefficients::negative_mode_norm(int comp) const {
  int n = grid_.size();
  double s = 0.0;
  // the unpaired Nyquist bin is excluded, as everywhere in this module
  for (int bin = n / 2 + 1; bin < n; ++bin) {
    if (signed_freq(bin, n) < 0) s += std::norm(coeffs_(bin, comp));
  }
  return std::sqrt(s);
}

double FourierCoefficients::negative_mode_content() const {
  double worst = 0.0;
  for (int c = 0; c < components(); ++c) {
    double total = coeffs_.col(c).norm();
    if (total == 0.0) continue;
    worst = std::max(worst, negative_mode_norm(c) / total);
  }
  return worst;
}

double FourierCoefficients::top_quarter_energy_fraction() const {
  int n = grid_.size();
  double total = coeffs_.squaredNorm();
  if (total == 0.0) return 0.0;
  double top = 0.0;
  for (int bin = 0; bin < n; ++bin) {
    if (std::abs(signed_freq(bin, n)) >= 3 * n / 8) top += coeffs_.row(bin).squaredNorm();
  }
  return top / total;
}

cd FourierCoefficients::eval(double theta, int comp) const {
  int n = grid_.size();
  cd s = 0.0;
  for (int bin = 0; bin < n; ++bin) {
    int k = signed_freq(bin, n);
    s += coeffs_(bin, comp) * std::polar(1.0, k * theta);
  }
  return s;
}

FourierCoefficients fft(const CircleFunction& f) {
  const int n = f.grid().size();
  Eigen::FFT<double> engine;
  Eigen::MatrixXcd out(n, f.components());
  std::vector<cd> in(n), freq(n);
  for (int c = 0; c < f.components(); ++c) {
    for (int j = 0; j < n; ++j) in[j] = f.samples()(j, c);
    engine.fwd(freq, in);
    for (int j = 0; j < n; ++j) out(j, c) = freq[j] / static_cast<double>(n);
  }
  return FourierCoefficients(f.grid(), f.kind(), f.rows(), f.cols(), out);
}

CircleFunction ifft(const FourierCoefficients& c) {
  const int n = c.grid().size();
  Eigen::FFT<double> engine;
  Eigen::MatrixXcd out(n, c.components());
  std::vector<cd> freq(n), vals(n);
  for (int comp = 0; comp < c.components(); ++comp) {
    for (int j = 0; j < n; ++j) freq[j] = c.data()(j, comp) * static_cast<double>(n);
    engine.inv(vals, freq);
    for (int j = 0; j < n; ++j) out(j, comp) = vals[j];
  }
  ValueKind kind = c.kind();
  if (kind_is_real(kind)) {
    // round-trips of real data may leave imaginary dust just above exact zero
    Eigen::MatrixXcd cleaned = out;
    if (cleaned.imag().cwiseAbs().maxCoeff() <= kRealTolerance)
      cleaned.imag().setZero();
    return CircleFunction(c.grid(), kind, c.rows(), c.cols(), cleaned);
  }
  return CircleFunction(c.grid(), kind, c.rows(), c.cols(), out);
}

CircleFunction hilbert_t1(const CircleFunction& u) {
  if (!u.is_real_kind())
    throw_domain("non-real-input", "hilbert_t1 requires a real-valued function");
  const int n = u.grid().size();
  FourierCoefficients c = fft(u);
  Eigen::MatrixXcd conj_coeffs(n, u.components());
  for (int bin = 0; bin < n; ++bin) {
    int k = signed_freq(bin, n);
    cd mult;
    if (k > 0)
      mult = cd(0, -1);
    else if (k < 0)
      mult = cd(0, 1);
    else
      mult = 0.0;
    // the unpaired Nyquist bin is zeroed to keep the conjugate real
    if (bin == n / 2) mult = 0.0;
    conj_coeffs.row(bin) = mult * c.data().row(bin);
  }
  CircleFunction t = ifft(FourierCoefficients(u.grid(), u.kind(), u.rows(), u.cols(), conj_coeffs));
  Eigen::MatrixXcd vals = t.samples();
  // subtract the node-0 value so (T1 u)(1) = 0 exactly
  Eigen::RowVectorXcd at_one = vals.row(0);
  vals.rowwise() -= at_one;
  vals.imag().setZero();
  return CircleFunction(u.grid(), u.kind(), u.rows(), u.cols(), vals);
}

Eigen::VectorXcd interior_eval(const CircleFunction& f, cd zeta, double neg_tol) {
  if (std::abs(zeta) >= 1.0)
    throw_domain("outside-disc", "interior_eval requires |zeta| < 1");
  FourierCoefficients c = fft(f);
  if (c.negative_mode_content() > neg_tol)
    throw_domain("not-holomorphic",
                 "negative-mode content " + std::to_string(c.negative_mode_content()) +
                     " exceeds tolerance; not a holomorphic boundary function");
  const int n = f.grid().size();
  Eigen::VectorXcd out(f.components());
  for (int comp = 0; comp < f.components(); ++comp) {
    cd acc = 0.0;  // Horner over nonnegative powers, highest first
    for (int k = n / 2 - 1; k >= 0; --k) acc = acc * zeta + c.data()(k, comp);
    out(comp) = acc;
  }
  return out;
}

Eigen::VectorXcd theta_derivative_at_one(const CircleFunction& f) {
  FourierCoefficients c = fft(f);
  const int n = f.grid().size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.components());
  for (int bin = 0; bin < n; ++bin) {
    int k = signed_freq(bin, n);
    if (bin == n / 2) continue;  // unpaired Nyquist bin
    for (int comp = 0; comp < f.components(); ++comp)
      out(comp) += cd(0, static_cast<double>(k)) * c.data()(bin, comp);
  }
  return out;
}

CircleFunction theta_derivative(const CircleFunction& f) {
  FourierCoefficients c = fft(f);
  const int n = f.grid().size();
  for (int bin = 0; bin < n; ++bin) {
    int k = bin == n / 2 ? 0 : signed_freq(bin, n);
    c.data().row(bin) *= cd(0, static_cast<double>(k));
  }
  ValueKind kind = f.kind();
  // derivatives of real data stay real, of complex stay complex
  return ifft(FourierCoefficients(f.grid(), kind, f.rows(), f.cols(), c.data()));
}

Eigen::VectorXcd zeta_derivative_at_one(const CircleFunction& f) {
  FourierCoefficients c = fft(f);
  const int n = f.grid().size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.components());
  for (int k = 1; k < n / 2; ++k)
    for (int comp = 0; comp < f.components(); ++comp)
      out(comp) += static_cast<double>(k) * c.data()(k, comp);
  return out;
}

namespace {

/// Shared preconditions of the J evaluators: vanishing at 1 and band-limited
/// enough that term-by-term differentiation at theta = 0 is trustworthy.
void check_j_preconditions(const CircleFunction& g, const FourierCoefficients& c) {
  double scale = std::max(1.0, g.sup_norm());
  for (int comp = 0; comp < g.components(); ++comp) {
    if (std::abs(g.samples()(0, comp)) > 1e-10 * scale)
      throw_domain("precondition", "j_functional requires g(1) = 0");
  }
  if (c.top_quarter_energy_fraction() > 1e-8)
    throw_domain("aliasing", "top-quarter spectrum above 1e-8 of total energy; "
                             "function is not resolved on this grid");
}

}  // namespace

double j_functional(const CircleFunction& g) {
  if (g.kind() != ValueKind::RealScalar)
    throw_domain("non-real-input", "j_functional requires a real scalar function");
  FourierCoefficients c = fft(g);
  check_j_preconditions(g, c);
  // For real g vanishing at 1, G = g + i T1 g has hat(G)_k = 2 hat(g)_k for
  // k >= 1, so J(g) = -Re G'(1) = -Re sum_{k>=1} 2 k hat(g)_k.
  const int n = g.grid().size();
  cd s = 0.0;
  for (int k = 1; k < n / 2; ++k) s += 2.0 * static_cast<double>(k) * c.data()(k, 0);
  return -s.real();
}

Eigen::VectorXd j_functional_vector(const CircleFunction& g) {
  if (g.kind() != ValueKind::RealVector && g.kind() != ValueKind::RealScalar)
    throw_domain("non-real-input", "j_functional_vector requires a real function");
  FourierCoefficients c = fft(g);
  check_j_preconditions(g, c);
  const int n = g.grid().size();
  Eigen::VectorXd out(g.components());
  for (int comp = 0; comp < g.components(); ++comp) {
    cd s = 0.0;
    for (int k = 1; k < n / 2; ++k) s += 2.0 * static_cast<double>(k) * c.data()(k, comp);
    out(comp) = -s.real();
  }
  return out;
}

cd j_functional_holo(const CircleFunction& g) {
  FourierCoefficients c = fft(g);
  double scale = std::max(1.0, g.sup_norm());
  if (std::abs(g.samples()(0, 0)) > 1e-10 * scale)
    throw_domain("precondition", "j_functional_holo requires g(1) = 0");
  if (c.negative_mode_content() > 1e-8)
    throw_domain("not-holomorphic", "j_functional_holo requires holomorphic boundary data");
  return -zeta_derivative_at_one(g)(0);
}

CircleFunction nodewise_product(const CircleFunction& a, const CircleFunction& b) {
  check_same_grid(a, b);
  if (a.cols() != b.rows())
    throw_config("shape-mismatch", "nodewise_product: inner dimensions disagree");
  const int n = a.grid().size();
  int rows = a.rows(), cols = b.cols();
  Eigen::MatrixXcd out(n, rows * cols);
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXcd prod = a.matrix_at(j) * b.matrix_at(j);
    out.row(j) = Eigen::Map<const Eigen::VectorXcd>(prod.data(), prod.size()).transpose();
  }
  bool real = a.is_real_kind() && b.is_real_kind();
  ValueKind kind;
  if (cols == 1)
    kind = rows == 1 ? (real ? ValueKind::RealScalar : ValueKind::ComplexScalar)
                     : (real ? ValueKind::RealVector : ValueKind::ComplexVector);
  else
    kind = real ? ValueKind::RealMatrix : ValueKind::ComplexMatrix;
  return CircleFunction(a.grid(), kind, rows, cols, out);
}

double holder_diagnostic_norm(const CircleFunction& f, double alpha) {
  const int n = f.grid().size();
  const double dtheta = f.grid().theta(1);
  double c0 = f.sup_norm();
  double c1 = 0.0, hq = 0.0;
  for (int j = 0; j < n; ++j) {
    int jn = (j + 1) % n;
    double diff = (f.samples().row(jn) - f.samples().row(j)).cwiseAbs().maxCoeff();
    c1 = std::max(c1, diff / dtheta);
    hq = std::max(hq, diff / std::pow(dtheta, alpha));
  }
  return c0 + c1 + hq;
}

}  // namespace disckit
