#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "disckit/errors.hpp"

namespace disckit {

using cd = std::complex<double>;

/// Imaginary parts above this bound disqualify data from the real-tagged kinds.
inline constexpr double kRealTolerance = 1e-12;

/// Uniform grid of the unit circle, theta_j = 2*pi*j/size, node 0 at zeta = 1.
/// Size must be a power of two, >= 16.
class CircleGrid {
 public:
  explicit CircleGrid(int size = 512);

  int size() const { return size_; }
  double theta(int j) const;
  cd node(int j) const { return std::polar(1.0, theta(j)); }

  bool operator==(const CircleGrid& o) const { return size_ == o.size_; }

 private:
  int size_;
};

enum class ValueKind { RealScalar, ComplexScalar, RealVector, ComplexVector, RealMatrix, ComplexMatrix };

bool kind_is_real(ValueKind k);

/// Sampled function on a CircleGrid. Values may be scalars, vectors or
/// matrices; storage is one flattened (column-major) value per node, so all
/// spectral operations act column by column. Real-tagged kinds are validated
/// on construction (imaginary parts below kRealTolerance).
class CircleFunction {
 public:
  CircleFunction(CircleGrid grid, ValueKind kind, int rows, int cols, Eigen::MatrixXcd samples);

  static CircleFunction real_scalar(CircleGrid g, const Eigen::VectorXd& v);
  static CircleFunction complex_scalar(CircleGrid g, const Eigen::VectorXcd& v);
  static CircleFunction real_vector(CircleGrid g, const Eigen::MatrixXd& v);
  static CircleFunction complex_vector(CircleGrid g, const Eigen::MatrixXcd& v);
  static CircleFunction real_matrix(CircleGrid g, int rows, int cols, const Eigen::MatrixXcd& flat);
  static CircleFunction complex_matrix(CircleGrid g, int rows, int cols, const Eigen::MatrixXcd& flat);

  /// Sample a scalar function of theta.
  static CircleFunction from_theta(CircleGrid g, const std::function<double(double)>& f);
  static CircleFunction from_theta_complex(CircleGrid g, const std::function<cd(double)>& f);

  const CircleGrid& grid() const { return grid_; }
  ValueKind kind() const { return kind_; }
  bool is_real_kind() const { return kind_is_real(kind_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int components() const { return rows_ * cols_; }

  const Eigen::MatrixXcd& samples() const { return samples_; }
  Eigen::MatrixXcd& samples() { return samples_; }

  cd scalar(int node) const { return samples_(node, 0); }
  Eigen::VectorXcd vector_at(int node) const;
  Eigen::MatrixXcd matrix_at(int node) const;
  Eigen::VectorXd real_vector_at(int node) const { return vector_at(node).real(); }
  Eigen::MatrixXd real_matrix_at(int node) const { return matrix_at(node).real(); }

  double sup_norm() const;

 private:
  CircleGrid grid_;
  ValueKind kind_;
  int rows_, cols_;
  Eigen::MatrixXcd samples_;  // grid.size() x (rows*cols)
};

/// Fourier coefficients of a CircleFunction, FFT bin order, normalized so that
/// value(theta) = sum_k coeff(k) * exp(i k theta) with signed k in
/// [-size/2, size/2).
class FourierCoefficients {
 public:
  FourierCoefficients(CircleGrid grid, ValueKind kind, int rows, int cols, Eigen::MatrixXcd coeffs);

  const CircleGrid& grid() const { return grid_; }
  ValueKind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int components() const { return rows_ * cols_; }
  int size() const { return grid_.size(); }

  const Eigen::MatrixXcd& data() const { return coeffs_; }
  Eigen::MatrixXcd& data() { return coeffs_; }

  /// Coefficient for signed frequency k of one component.
  cd coeff(int k, int comp = 0) const;

  /// l2 norm of strictly negative modes of one component.
  double negative_mode_norm(int comp) const;
  /// Negative-mode norm relative to the full l2 norm, maximized over
  /// components (0 when the function vanishes identically).
  double negative_mode_content() const;

  /// Fraction of total energy carried by the top quarter of the frequency
  /// bins (|k| >= 3*size/8); the aliasing guard of the spectral evaluators.
  double top_quarter_energy_fraction() const;

  /// Evaluate the trigonometric interpolant of one component at angle theta.
  cd eval(double theta, int comp = 0) const;

 private:
  CircleGrid grid_;
  ValueKind kind_;
  int rows_, cols_;
  Eigen::MatrixXcd coeffs_;
};

FourierCoefficients fft(const CircleFunction& f);
CircleFunction ifft(const FourierCoefficients& c);

/// Hilbert transform normalized so (T1 u)(1) = 0; node-0 value is subtracted,
/// making the normalization exact. Componentwise on real kinds.
CircleFunction hilbert_t1(const CircleFunction& u);

/// Evaluate the holomorphic extension of a holomorphic-boundary function at
/// |zeta| < 1 from its nonnegative Fourier modes. One value per component.
Eigen::VectorXcd interior_eval(const CircleFunction& f, cd zeta, double neg_tol = 1e-8);

/// d/dtheta at theta = 0, per component (full signed spectrum).
Eigen::VectorXcd theta_derivative_at_one(const CircleFunction& f);

/// d/dtheta everywhere, term-by-term differentiation of the interpolant.
CircleFunction theta_derivative(const CircleFunction& f);

/// d/dzeta at zeta = 1 of the holomorphic extension: sum_{k>=1} k c_k.
Eigen::VectorXcd zeta_derivative_at_one(const CircleFunction& f);

/// Principal-value functional J(g) = (1/pi) pv-int g / |zeta - 1|^2 dtheta for
/// real scalar g with g(1) = 0, evaluated through the derivative identity
/// J(g) = -Re (g + i T1 g)'(1). Never quadratured directly.
double j_functional(const CircleFunction& g);

/// Componentwise J on a real vector function.
Eigen::VectorXd j_functional_vector(const CircleFunction& g);

/// Holomorphic variant: J(g) = -g'(1) for holomorphic-boundary scalar g with
/// g(1) = 0.
cd j_functional_holo(const CircleFunction& g);

/// Nodewise product of a matrix-valued function with a matrix- or
/// vector-valued one.
CircleFunction nodewise_product(const CircleFunction& a, const CircleFunction& b);

/// Discrete stand-in for the C^1 norm plus the highest-resolved Hoelder
/// quotient; diagnostics only.
double holder_diagnostic_norm(const CircleFunction& f, double alpha = 0.5);

}  // namespace disckit
