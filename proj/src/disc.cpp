#include "disckit/disc.hpp"

#include "disckit/errors.hpp"

namespace disckit {

namespace {

// Power-series evaluation that trusts the caller about holomorphy; the solver
// guarantees the negative modes are at residual level.
Eigen::VectorXcd eval_nonnegative_modes(const CircleFunction& f, cd zeta) {
  FourierCoefficients c = fft(f);
  const int n = f.grid().size();
  Eigen::VectorXcd out(f.components());
  for (int comp = 0; comp < f.components(); ++comp) {
    cd acc = 0.0;
    for (int k = n / 2 - 1; k >= 0; --k) acc = acc * zeta + c.data()(k, comp);
    out(comp) = acc;
  }
  return out;
}

}  // namespace

AnalyticDisc::AnalyticDisc(CircleFunction w, CircleFunction x, CircleFunction y, double residual)
    : w_(std::move(w)), x_(std::move(x)), y_(std::move(y)), residual_(residual) {
  if (!(w_.grid() == x_.grid()) || !(x_.grid() == y_.grid()))
    throw_config("grid-mismatch", "disc components live on different grids");
  if (x_.rows() != y_.rows())
    throw_config("bad-disc", "x and y components disagree in dimension");
}

CircleFunction AnalyticDisc::z_boundary() const {
  Eigen::MatrixXcd z = x_.samples() + cd(0, 1) * y_.samples();
  return CircleFunction::complex_vector(x_.grid(), z);
}

CircleFunction AnalyticDisc::boundary() const {
  Eigen::MatrixXcd all(grid().size(), n());
  all.leftCols(p()) = w_.samples();
  all.rightCols(q()) = x_.samples() + cd(0, 1) * y_.samples();
  return CircleFunction::complex_vector(grid(), all);
}

Eigen::VectorXcd AnalyticDisc::boundary_point(int node) const {
  Eigen::VectorXcd z(n());
  z.head(p()) = w_.vector_at(node);
  z.tail(q()) = x_.vector_at(node) + cd(0, 1) * y_.vector_at(node);
  return z;
}

Eigen::MatrixXcd AnalyticDisc::boundary_points() const {
  Eigen::MatrixXcd all(grid().size(), n());
  all.leftCols(p()) = w_.samples();
  all.rightCols(q()) = x_.samples() + cd(0, 1) * y_.samples();
  return all;
}

Eigen::VectorXcd AnalyticDisc::eval(cd zeta) const {
  if (std::abs(zeta) >= 1.0) throw_domain("outside-disc", "disc evaluation requires |zeta| < 1");
  return eval_nonnegative_modes(boundary(), zeta);
}

Eigen::VectorXcd AnalyticDisc::theta_derivative_at_one() const {
  return disckit::theta_derivative_at_one(boundary());
}

Eigen::VectorXcd AnalyticDisc::zeta_derivative_at_one() const {
  return disckit::zeta_derivative_at_one(boundary());
}

double AnalyticDisc::holomorphy_defect() const {
  return fft(z_boundary()).negative_mode_content();
}

double AnalyticDisc::boundary_diameter() const {
  Eigen::MatrixXcd pts = boundary_points();
  double d = 0.0;
  for (int i = 0; i < pts.rows(); ++i)
    for (int j = i + 1; j < pts.rows(); ++j)
      d = std::max(d, (pts.row(i) - pts.row(j)).norm());
  return d;
}

double AnalyticDisc::attachment_residual(const GenericManifold& M) const {
  double worst = 0.0;
  for (int j = 0; j < grid().size(); ++j)
    worst = std::max(worst, M.eval_r(boundary_point(j)).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace disckit
