#include "disckit/manifold.hpp"

#include <cmath>

#include "disckit/errors.hpp"

namespace disckit {

Eigen::VectorXd ambient_real(const Eigen::VectorXcd& z, int p, int q) {
  Eigen::VectorXd r(2 * (p + q));
  for (int k = 0; k < p; ++k) {
    r(k) = z(k).real();
    r(p + k) = z(k).imag();
  }
  for (int j = 0; j < q; ++j) {
    r(2 * p + j) = z(p + j).real();
    r(2 * p + q + j) = z(p + j).imag();
  }
  return r;
}

Eigen::VectorXcd ambient_complex(const Eigen::VectorXd& r, int p, int q) {
  Eigen::VectorXcd z(p + q);
  for (int k = 0; k < p; ++k) z(k) = cd(r(k), r(p + k));
  for (int j = 0; j < q; ++j) z(p + j) = cd(r(2 * p + j), r(2 * p + q + j));
  return z;
}

Eigen::VectorXd chart_of(const Eigen::VectorXcd& z, int p, int q) {
  return ambient_real(z, p, q).head(2 * p + q);
}

Eigen::VectorXd apply_j(const Eigen::VectorXd& r, int p, int q) {
  Eigen::VectorXd out(2 * (p + q));
  out.segment(0, p) = -r.segment(p, p);        // u' = -v
  out.segment(p, p) = r.segment(0, p);         // v' = u
  out.segment(2 * p, q) = -r.segment(2 * p + q, q);  // x' = -y
  out.segment(2 * p + q, q) = r.segment(2 * p, q);   // y' = x
  return out;
}

GenericManifold::GenericManifold(int p, int q, std::vector<Polynomial> h,
                                 Eigen::VectorXcd base_point)
    : p_(p), q_(q), h_(std::move(h)), base_point_(std::move(base_point)) {
  if (p_ < 1 || q_ < 1)
    throw_config("bad-manifold", "CR dimension and codimension must both be positive");
  if (static_cast<int>(h_.size()) != q_)
    throw_config("bad-manifold", "graph map must have q components");
  const int nv = 2 * p_ + q_;
  for (const auto& hj : h_) {
    if (hj.nvars() != nv)
      throw_config("bad-manifold", "graph component has wrong variable count");
    if (hj.constant_term() != 0.0)
      throw_config("bad-manifold", "graph must satisfy h(0) = 0");
    for (const auto& t : hj.terms()) {
      int deg = 0;
      for (int e : t.expo) deg += e;
      if (deg == 1)
        throw_config("bad-manifold", "graph must satisfy dh(0) = 0");
    }
  }
  if (base_point_.size() == 0) base_point_ = Eigen::VectorXcd::Zero(n());
  if (base_point_.size() != n())
    throw_config("bad-manifold", "base point has wrong dimension");

  dh_.resize(q_);
  for (int j = 0; j < q_; ++j) {
    dh_[j].reserve(nv);
    for (int v = 0; v < nv; ++v) dh_[j].push_back(h_[j].derivative(v));
  }
}

Eigen::VectorXd GenericManifold::h_eval(const Eigen::VectorXd& uvx) const {
  Eigen::VectorXd out(q_);
  for (int j = 0; j < q_; ++j) out(j) = h_[j](uvx);
  return out;
}

Eigen::MatrixXd GenericManifold::h_jacobian(const Eigen::VectorXd& uvx) const {
  Eigen::MatrixXd out(q_, 2 * p_ + q_);
  for (int j = 0; j < q_; ++j)
    for (int v = 0; v < 2 * p_ + q_; ++v) out(j, v) = dh_[j][v](uvx);
  return out;
}

Eigen::VectorXd GenericManifold::eval_r(const Eigen::VectorXcd& z) const {
  Eigen::VectorXd uvx = chart_of(z, p_, q_);
  Eigen::VectorXd y(q_);
  for (int j = 0; j < q_; ++j) y(j) = z(p_ + j).imag();
  return y - h_eval(uvx);
}

Eigen::MatrixXcd GenericManifold::r_z(const Eigen::VectorXcd& z) const {
  Eigen::VectorXd uvx = chart_of(z, p_, q_);
  Eigen::MatrixXd jac = h_jacobian(uvx);
  Eigen::MatrixXcd out(q_, n());
  // d/dw_k = (1/2)(d/du_k - i d/dv_k) applied to  y_j - h_j(u,v,x)
  for (int j = 0; j < q_; ++j) {
    for (int k = 0; k < p_; ++k)
      out(j, k) = -0.5 * cd(jac(j, k), -jac(j, p_ + k));
    // d/dz_l = (1/2)(d/dx_l - i d/dy_l):  y_j gives -i/2 delta_jl
    for (int l = 0; l < q_; ++l)
      out(j, p_ + l) = cd(0.0, j == l ? -0.5 : 0.0) - 0.5 * jac(j, 2 * p_ + l);
  }
  return out;
}

Eigen::VectorXcd GenericManifold::point_on_m(const Eigen::VectorXd& uvx) const {
  Eigen::VectorXd y = h_eval(uvx);
  Eigen::VectorXcd z(n());
  for (int k = 0; k < p_; ++k) z(k) = cd(uvx(k), uvx(p_ + k));
  for (int j = 0; j < q_; ++j) z(p_ + j) = cd(uvx(2 * p_ + j), y(j));
  return z;
}

Eigen::MatrixXd GenericManifold::tangent_basis(const Eigen::VectorXcd& z) const {
  const int chart = 2 * p_ + q_;
  Eigen::MatrixXd jac = h_jacobian(chart_of(z, p_, q_));
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(2 * n(), chart);
  basis.topRows(chart).setIdentity();
  basis.bottomRows(q_) = jac;
  return basis;
}

Eigen::MatrixXd GenericManifold::complex_tangent_basis(const Eigen::VectorXcd& z) const {
  const int chart = 2 * p_ + q_;
  const int dim = 2 * n();
  Eigen::MatrixXd jac = h_jacobian(chart_of(z, p_, q_));
  // rows 1..q:    X tangent:   dy - H_u du - H_v dv - H_x dx = 0
  // rows q+1..2q: JX tangent:  dx + H_u dv - H_v du + H_x dy = 0
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(2 * q_, dim);
  auto Hu = jac.leftCols(p_);
  auto Hv = jac.middleCols(p_, p_);
  auto Hx = jac.rightCols(q_);
  sys.block(0, 0, q_, p_) = -Hu;
  sys.block(0, p_, q_, p_) = -Hv;
  sys.block(0, 2 * p_, q_, q_) = -Hx;
  sys.block(0, chart, q_, q_).setIdentity();
  sys.block(q_, 0, q_, p_) = -Hv;
  sys.block(q_, p_, q_, p_) = Hu;
  sys.block(q_, 2 * p_, q_, q_).setIdentity();
  sys.block(q_, chart, q_, q_) = Hx;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeFullV);
  double thr = 1e-8 * std::max(1.0, svd.singularValues()(0));
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++rank;
  int nullity = dim - rank;
  if (nullity != 2 * p_)
    throw_domain("degenerate-geometry",
                 "complex tangent space has unexpected dimension " + std::to_string(nullity));
  return svd.matrixV().rightCols(2 * p_);
}

Eigen::MatrixXd GenericManifold::h_values(const Eigen::MatrixXcd& w,
                                          const Eigen::MatrixXd& x) const {
  const int nnodes = static_cast<int>(w.rows());
  Eigen::MatrixXd out(nnodes, q_);
  Eigen::VectorXd uvx(2 * p_ + q_);
  for (int i = 0; i < nnodes; ++i) {
    for (int k = 0; k < p_; ++k) {
      uvx(k) = w(i, k).real();
      uvx(p_ + k) = w(i, k).imag();
    }
    uvx.tail(q_) = x.row(i);
    for (int j = 0; j < q_; ++j) out(i, j) = h_[j](uvx);
  }
  return out;
}

CircleFunction GenericManifold::hx_function(const CircleGrid& g, const Eigen::MatrixXcd& w,
                                            const Eigen::MatrixXd& x) const {
  const int nnodes = g.size();
  Eigen::MatrixXcd flat(nnodes, q_ * q_);
  Eigen::VectorXd uvx(2 * p_ + q_);
  for (int i = 0; i < nnodes; ++i) {
    for (int k = 0; k < p_; ++k) {
      uvx(k) = w(i, k).real();
      uvx(p_ + k) = w(i, k).imag();
    }
    uvx.tail(q_) = x.row(i);
    for (int l = 0; l < q_; ++l)
      for (int j = 0; j < q_; ++j)
        flat(i, l * q_ + j) = dh_[j][2 * p_ + l](uvx);  // column-major (j, l) entry
  }
  return CircleFunction::real_matrix(g, q_, q_, flat);
}

CircleFunction GenericManifold::rz_function(const CircleGrid& g,
                                            const Eigen::MatrixXcd& points) const {
  const int nnodes = g.size();
  Eigen::MatrixXcd flat(nnodes, q_ * n());
  for (int i = 0; i < nnodes; ++i) {
    Eigen::MatrixXcd rz = r_z(points.row(i).transpose());
    flat.row(i) = Eigen::Map<const Eigen::VectorXcd>(rz.data(), rz.size()).transpose();
  }
  return CircleFunction::complex_matrix(g, q_, n(), flat);
}

DefiningData build_defining_data(const GenericManifold& M) {
  DefiningData dd;
  dd.rz0 = M.r_z(M.base_point());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dd.rz0, Eigen::ComputeThinU | Eigen::ComputeThinV);
  dd.singular_values = svd.singularValues();
  double thr = 1e-8 * std::max(1.0, dd.singular_values(0));
  if (dd.singular_values(M.q() - 1) <= thr)
    throw_domain("not-generic", "r_z at the base point does not have rank q");
  // Moore-Penrose right factor
  Eigen::MatrixXcd sinv = dd.singular_values.cwiseInverse().asDiagonal();
  dd.D = svd.matrixV() * sinv * svd.matrixU().adjoint();
  double err = (dd.rz0 * dd.D - Eigen::MatrixXcd::Identity(M.q(), M.q())).cwiseAbs().maxCoeff();
  if (err > 1e-12)
    throw_domain("not-generic", "right inverse residual " + std::to_string(err));
  return dd;
}

Submanifold::Submanifold(const GenericManifold& M, std::vector<Polynomial> equations)
    : p_(M.p()), q_(M.q()), equations_(std::move(equations)) {
  if (equations_.empty() || equations_.size() > 3)
    throw_config("bad-submanifold", "codimension in M must be 1, 2 or 3");
  const int nv = 2 * p_ + q_;
  for (const auto& e : equations_)
    if (e.nvars() != nv)
      throw_config("bad-submanifold", "equation has wrong variable count");
  grads_.resize(equations_.size());
  for (size_t i = 0; i < equations_.size(); ++i)
    for (int v = 0; v < nv; ++v) grads_[i].push_back(equations_[i].derivative(v));

  // embeddedness at the base point when the submanifold passes through it
  Eigen::VectorXcd z0 = M.base_point();
  if (eval(z0).norm() < 1e-10) {
    Eigen::MatrixXd gr = gradients(z0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gr);
    double thr = 1e-8 * std::max(1.0, svd.singularValues()(0));
    if (svd.singularValues()(svd.singularValues().size() - 1) <= thr)
      throw_domain("degenerate-geometry",
                   "submanifold equations are not independent at the base point");
  }
}

Eigen::VectorXd Submanifold::eval(const Eigen::VectorXcd& z) const {
  return eval_chart(chart_of(z, p_, q_));
}

Eigen::VectorXd Submanifold::eval_chart(const Eigen::VectorXd& uvx) const {
  Eigen::VectorXd out(codim_in_m());
  for (int i = 0; i < codim_in_m(); ++i) out(i) = equations_[i](uvx);
  return out;
}

Eigen::MatrixXd Submanifold::gradients(const Eigen::VectorXcd& z) const {
  Eigen::VectorXd uvx = chart_of(z, p_, q_);
  Eigen::MatrixXd out(codim_in_m(), 2 * p_ + q_);
  for (int i = 0; i < codim_in_m(); ++i)
    for (int v = 0; v < 2 * p_ + q_; ++v) out(i, v) = grads_[i][v](uvx);
  return out;
}

TangencyReport tangency_check(const Submanifold& N, const GenericManifold& M,
                              const Eigen::VectorXcd& z, double threshold) {
  if (M.eval_r(z).norm() > 1e-8 || N.eval(z).norm() > 1e-8)
    throw_domain("off-manifold", "point is not on M and N within 1e-8");

  Eigen::MatrixXd ctb = M.complex_tangent_basis(z);  // 2n x 2p, chart part on top
  Eigen::MatrixXd grads = N.gradients(z);            // codim x (2p+q)
  const int chart = 2 * M.p() + M.q();
  Eigen::MatrixXd test = grads * ctb.topRows(chart);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(test, Eigen::ComputeFullV);
  double scale = std::max(1.0, grads.norm());
  double top = svd.singularValues()(0);
  double thr = threshold * scale;

  TangencyReport rep;
  rep.violation = top;
  rep.degenerate_warning = top > thr && top < 10.0 * thr;
  rep.contains_complex_tangent = top <= thr;
  if (!rep.contains_complex_tangent) {
    Eigen::VectorXd coeffs = svd.matrixV().col(0);
    Eigen::VectorXd dir = ctb * coeffs;  // ambient real vector in T^c \ T_zN
    rep.witness = ambient_complex(dir, M.p(), M.q());
  }
  return rep;
}

}  // namespace disckit
