#include "disckit/defect.hpp"

#include <cmath>

#include "disckit/errors.hpp"

namespace disckit {

namespace {

int signed_freq(int bin, int size) { return bin < size / 2 ? bin : bin - size; }

double negative_mode_sup(const FourierCoefficients& c) {
  const int n = c.size();
  double worst = 0.0;
  for (int bin = n / 2; bin < n; ++bin) {
    if (signed_freq(bin, n) >= 0) continue;
    worst = std::max(worst, c.data().row(bin).cwiseAbs().maxCoeff());
  }
  return worst;
}

int rank_with_threshold(const Eigen::MatrixXd& m, double rel) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  double top = svd.singularValues()(0);
  if (top == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel * top) ++r;
  return r;
}

}  // namespace

NuFactorization factor_nu(const AnalyticDisc& A, const GenericManifold& M,
                          const DefiningData& dd, const FactorOptions& opts) {
  const CircleGrid& g = A.grid();
  const int n = g.size(), q = M.q();

  CircleFunction rzA = M.rz_function(g, A.boundary_points());
  Eigen::MatrixXcd dflat =
      Eigen::Map<const Eigen::VectorXcd>(dd.D.data(), dd.D.size()).transpose().replicate(n, 1);
  CircleFunction dconst = CircleFunction::complex_matrix(g, M.n(), q, dflat);
  CircleFunction m = nodewise_product(rzA, dconst);  // q x q

  double dist_to_id = 0.0;
  for (int j = 0; j < n; ++j)
    dist_to_id = std::max(
        dist_to_id, (m.matrix_at(j) - Eigen::MatrixXcd::Identity(q, q)).cwiseAbs().maxCoeff());
  if (dist_to_id >= opts.contraction_bound)
    throw_domain("out-of-contraction",
                 "||m - I|| = " + std::to_string(dist_to_id) +
                     " is outside the contraction region of the factorization");

  // Iterate on mu = nu - I: impose the negative modes of (I + mu) m = 0 at
  // leading order, mirror to positive modes (mu is real), pin mu(1) = 0.
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(n, q * q);
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  std::vector<double> trace;
  for (; it < opts.max_iter; ++it) {
    CircleFunction mu_cur = CircleFunction::real_matrix(g, q, q, mu.cast<cd>());
    Eigen::MatrixXcd num = nodewise_product(mu_cur, m).samples() + m.samples();  // (I+mu) m
    residual = negative_mode_sup(fft(CircleFunction::complex_matrix(g, q, q, num)));
    trace.push_back(residual);
    if (residual <= opts.tol) break;

    FourierCoefficients c =
        fft(CircleFunction::complex_matrix(g, q, q, num - mu.cast<cd>()));
    Eigen::MatrixXcd cmu = Eigen::MatrixXcd::Zero(n, q * q);
    for (int bin = n / 2; bin < n; ++bin) {
      if (signed_freq(bin, n) >= 0) continue;
      cmu.row(bin) = -c.data().row(bin);
    }

    for (int bin = 1; bin < n / 2; ++bin) cmu.row(bin) = cmu.row(n - bin).conjugate();
    CircleFunction munew_f =
        ifft(FourierCoefficients(g, ValueKind::ComplexMatrix, q, q, cmu));
    Eigen::MatrixXd munew = munew_f.samples().real();
    Eigen::RowVectorXd at_one = munew.row(0);  // copy before shifting (aliasing)
    munew.rowwise() -= at_one;                 // mu(1) = 0 exactly

    mu += opts.damping * (munew - mu);
  }

  if (residual > opts.tol) {
    std::string tr;
    for (size_t i = trace.size() >= 5 ? trace.size() - 5 : 0; i < trace.size(); ++i)
      tr += " " + std::to_string(trace[i]);
    throw_convergence("factorization-failure",
                      "nu-factorization did not converge; residual trace:" + tr);
  }

  Eigen::MatrixXcd nu_flat = mu.cast<cd>();
  for (int d = 0; d < q; ++d) nu_flat.col(d * q + d).array() += 1.0;
  CircleFunction nu = CircleFunction::real_matrix(g, q, q, nu_flat);

  for (int j = 0; j < n; ++j) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(nu.real_matrix_at(j));
    if (svd.singularValues()(q - 1) <= opts.min_singular)
      throw_convergence("factorization-failure",
                        "nu is numerically singular at node " + std::to_string(j));
  }

  return NuFactorization{std::move(nu), std::move(m), residual, it};
}

DefectReport compute_defect(const AnalyticDisc& A, const GenericManifold& M,
                            const NuFactorization& fac, std::vector<int> sample_nodes,
                            const DefectOptions& opts) {
  const CircleGrid& g = A.grid();
  const int n = g.size(), q = M.q(), dim = M.n();
  const int K = opts.truncation > 0 ? opts.truncation : n / 4;

  if (sample_nodes.empty())
    for (int s = 0; s < 8; ++s) sample_nodes.push_back(s * n / 8);

  CircleFunction rzA = M.rz_function(g, A.boundary_points());
  CircleFunction prod = nodewise_product(fac.nu, rzA);  // q x dim
  FourierCoefficients pc = fft(prod);

  // columns: basis covectors e_i; rows: stacked Re/Im of modes -1..-K of the
  // dim components of e_i nu r_z(A)
  Eigen::MatrixXd constraint(2 * K * dim, q);
  for (int i = 0; i < q; ++i) {
    int row = 0;
    for (int j = 0; j < dim; ++j) {
      int comp = j * q + i;  // (i, j) entry of the q x dim product
      for (int k = 1; k <= K; ++k) {
        cd ck = pc.coeff(-k, comp);
        constraint(row++, i) = ck.real();
        constraint(row++, i) = ck.imag();
      }
    }
  }

  DefectReport rep;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraint, Eigen::ComputeFullV);
  rep.singular_values = svd.singularValues();
  double top = rep.singular_values(0);
  if (top == 0.0) {
    rep.defect = q;
    rep.basis_b = Eigen::MatrixXd::Identity(q, q);
  } else {
    double thr = opts.rank_threshold * top;
    int rank = 0;
    for (int i = 0; i < rep.singular_values.size(); ++i) {
      if (rep.singular_values(i) > thr) ++rank;
      if (rep.singular_values(i) > thr && rep.singular_values(i) < 10.0 * thr)
        rep.rank_warning = true;
    }
    rep.defect = q - rank;
    rep.basis_b = svd.matrixV().rightCols(rep.defect);
  }

  // dim V_A(zeta_0) at each sample: rank of the covectors i b nu dr(A(zeta_0))
  rep.sample_nodes = std::move(sample_nodes);
  for (int node : rep.sample_nodes) {
    if (rep.defect == 0) {
      rep.per_zeta_defects.push_back(0);
      continue;
    }
    Eigen::MatrixXcd rz = M.r_z(A.boundary_point(node));
    Eigen::MatrixXd nu0 = fac.nu.real_matrix_at(node);
    Eigen::MatrixXd covectors(rep.defect, 2 * dim);
    for (int i = 0; i < rep.defect; ++i) {
      Eigen::RowVectorXcd xi = cd(0, 1) * (rep.basis_b.col(i).transpose() * nu0 * rz);
      covectors.row(i).head(dim) = xi.real();
      covectors.row(i).tail(dim) = xi.imag();
    }
    rep.per_zeta_defects.push_back(rank_with_threshold(covectors, opts.rank_threshold));
  }
  return rep;
}

RankVerdict verify_rank_theorem(const Eigen::MatrixXd& jac_eval, int node_zeta0,
                                const Eigen::MatrixXd& jac_dir, const AnalyticDisc& A,
                                const GenericManifold& M, const NuFactorization& fac,
                                const DefectReport& report, double svd_threshold) {
  const int tangent_dim = 2 * M.p() + M.q();
  if (jac_eval.cols() < tangent_dim || jac_dir.cols() < tangent_dim)
    throw_domain("insufficient-slice",
                 "family slice must have dimension >= 2p+q = " + std::to_string(tangent_dim));

  RankVerdict v;
  v.codim_evaluation = tangent_dim - rank_with_threshold(jac_eval, svd_threshold);
  v.codim_direction = tangent_dim - rank_with_threshold(jac_dir, svd_threshold);
  v.matches_defect =
      v.codim_evaluation == report.defect && v.codim_direction == report.defect;

  // T^c inclusion via projection residuals against the image spans
  auto span_residual = [&](const Eigen::MatrixXd& jac, const Eigen::VectorXcd& at) {
    Eigen::MatrixXd tc = M.complex_tangent_basis(at);
    double worst = 0.0;
    for (int i = 0; i < tc.cols(); ++i) {
      Eigen::VectorXd t = tc.col(i);
      Eigen::VectorXd coeffs = jac.colPivHouseholderQr().solve(t);
      worst = std::max(worst, (t - jac * coeffs).norm() / t.norm());
    }
    return worst;
  };
  double r1 = span_residual(jac_eval, A.boundary_point(node_zeta0));
  double r2 = span_residual(jac_dir, A.base_point());
  v.tc_residual = std::max(r1, r2);
  v.tc_included = v.tc_residual < 1e-6;

  // Admissible covectors annihilate the evaluation image.
  Eigen::MatrixXcd rz = M.r_z(A.boundary_point(node_zeta0));
  Eigen::MatrixXd nu0 = fac.nu.real_matrix_at(node_zeta0);
  for (int i = 0; i < report.defect; ++i) {
    Eigen::RowVectorXcd xi = cd(0, 1) * (report.basis_b.col(i).transpose() * nu0 * rz);
    for (int c = 0; c < jac_eval.cols(); ++c) {
      Eigen::VectorXcd vcol = ambient_complex(jac_eval.col(c), M.p(), M.q());
      double denom = xi.norm() * vcol.norm();
      if (denom == 0.0) continue;
      cd pairing = (xi * vcol)(0, 0);
      v.orthogonality_residual = std::max(v.orthogonality_residual, std::abs(pairing) / denom);
    }
  }
  return v;
}

}  // namespace disckit
