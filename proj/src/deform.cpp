#include "disckit/deform.hpp"

#include <cmath>

#include "disckit/errors.hpp"
#include "disckit/linprog.hpp"

namespace disckit {

double smooth_cutoff(double s) {
  auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  double a = f(1.0 - s), b = f(s - 0.5);
  return a / (a + b);
}

DeformedGraph::DeformedGraph(const GenericManifold& base, const AnalyticDisc& base_disc,
                             const DeformOptions& opts)
    : base_(&base),
      chi_(CircleFunction::real_scalar(base_disc.grid(),
                                       Eigen::VectorXd::Zero(base_disc.grid().size()))),
      opts_(opts) {
  const CircleGrid& g = base_disc.grid();
  const double pi = std::numbers::pi;
  const double delta = opts.chi_halfwidth;

  Eigen::VectorXd raw = Eigen::VectorXd::Zero(g.size());
  for (int j = 0; j < g.size(); ++j) {
    double d = g.theta(j) - pi;
    if (std::abs(d) < delta)
      raw(j) = std::exp(-delta * delta / (delta * delta - d * d));
  }
  CircleFunction raw_fun = CircleFunction::real_scalar(g, raw);
  double jraw = j_functional(raw_fun);
  if (jraw <= 0.0)
    throw_domain("degenerate-geometry", "boundary bump has nonpositive J; cannot normalize");
  chi_ = CircleFunction::real_scalar(g, raw / jraw);

  int anchor = g.size() / 2;  // zeta = -1
  w_anchor_ = base_disc.w_boundary().vector_at(anchor);
  x_anchor_ = base_disc.x_component().real_vector_at(anchor);
}

Eigen::VectorXd DeformedGraph::kappa(const Eigen::VectorXd& t) const {
  return t * smooth_cutoff(t.norm() / opts_.kappa_radius);
}

double DeformedGraph::mu(const Eigen::VectorXcd& w, const Eigen::VectorXd& x) const {
  double b = 1.0;
  for (int k = 0; k < w.size(); ++k) {
    b *= smooth_cutoff(std::abs(w(k).real() - w_anchor_(k).real()) / opts_.mu_radius);
    b *= smooth_cutoff(std::abs(w(k).imag() - w_anchor_(k).imag()) / opts_.mu_radius);
  }
  for (int j = 0; j < x.size(); ++j)
    b *= smooth_cutoff(std::abs(x(j) - x_anchor_(j)) / opts_.mu_radius);
  return b;
}

Eigen::VectorXd DeformedGraph::mu_values(const Eigen::MatrixXcd& w,
                                         const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(w.rows());
  for (int j = 0; j < w.rows(); ++j)
    out(j) = mu(w.row(j).transpose(), x.row(j).transpose());
  return out;
}

GraphFn DeformedGraph::graph(const Eigen::VectorXd& t) const {
  if (t.size() != base_->q())
    throw_config("bad-deformation", "deformation parameter must lie in R^q");
  const GenericManifold* M = base_;
  const DeformedGraph* self = this;
  Eigen::VectorXd tc = t;
  return [M, self, tc](const Eigen::MatrixXcd& w, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd y = M->h_values(w, x);
    for (int j = 0; j < y.rows(); ++j) {
      double chij = self->chi_.scalar(j).real();
      if (chij == 0.0) continue;
      Eigen::VectorXd bump =
          self->kappa(tc * chij) * self->mu(w.row(j).transpose(), x.row(j).transpose());
      y.row(j) += bump.transpose();
    }
    return y;
  };
}

GMatrixResult solve_g_matrix(const AnalyticDisc& A, const GenericManifold& M,
                             const BishopOptions& opts) {
  const CircleGrid& g = A.grid();
  const int q = M.q();
  CircleFunction hx = M.hx_function(g, A.w_boundary().samples(),
                                    A.x_component().samples().real());

  Eigen::MatrixXcd id_flat = Eigen::MatrixXcd::Zero(g.size(), q * q);
  for (int d = 0; d < q; ++d) id_flat.col(d * q + d).setOnes();

  Eigen::MatrixXcd gsamples = id_flat;
  double lambda = opts.damping;
  double prev = std::numeric_limits<double>::infinity();
  double residual = prev;
  std::vector<double> trace;
  for (int it = 0; it < opts.max_iter; ++it) {
    CircleFunction gf = CircleFunction::real_matrix(g, q, q, gsamples);
    CircleFunction prod = nodewise_product(gf, hx);
    Eigen::MatrixXcd target = id_flat + hilbert_t1(prod).samples();
    residual = (target - gsamples).cwiseAbs().maxCoeff();
    trace.push_back(residual);
    if (residual <= opts.tol) break;
    if (residual > prev) lambda = std::max(lambda * 0.5, 1.0 / 64.0);
    prev = residual;
    gsamples += lambda * (target - gsamples);
  }
  if (residual > opts.tol) {
    std::string tr;
    for (size_t i = trace.size() >= 5 ? trace.size() - 5 : 0; i < trace.size(); ++i)
      tr += " " + std::to_string(trace[i]);
    throw_convergence("contraction-failure",
                      "G-matrix iteration did not converge; residual trace:" + tr);
  }
  CircleFunction gf = CircleFunction::real_matrix(g, q, q, gsamples);
  return GMatrixResult{gf, residual, static_cast<int>(trace.size())};
}

namespace {

// D(t) = Pi(-dA_t/dzeta(1)) in the y-coordinates of T_0 C^n / T_0 M.
Eigen::VectorXd normal_value(const AnalyticDisc& disc) {
  Eigen::VectorXcd dz = zeta_derivative_at_one(disc.z_boundary());
  return -dz.imag();
}

AnalyticDisc solve_at_t(const AnalyticDisc& A, const DeformedGraph& dg, const Eigen::VectorXd& t,
                        const BishopOptions& opts) {
  Eigen::VectorXd x0 = A.x_component().real_vector_at(0);
  return solve_bishop(dg.base(), A.w_boundary(), x0, opts, dg.graph(t));
}

}  // namespace

NormalDerivativeResult normal_derivative_map(const AnalyticDisc& A, const DeformedGraph& dg,
                                             double step, const BishopOptions& opts) {
  const GenericManifold& M = dg.base();
  const int q = M.q();
  BishopOptions tight = opts;
  tight.tol = std::min(opts.tol, 1e-12);

  NormalDerivativeResult res;
  res.d0 = normal_value(solve_at_t(A, dg, Eigen::VectorXd::Zero(q), tight));
  res.d_prime.resize(q, q);
  for (int j = 0; j < q; ++j) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(q);
    t(j) = step;
    Eigen::VectorXd fwd = normal_value(solve_at_t(A, dg, t, tight));
    t(j) = -step;
    Eigen::VectorXd bwd = normal_value(solve_at_t(A, dg, t, tight));
    res.d_prime.col(j) = (fwd - bwd) / (2.0 * step);
  }

  // Independent route: column j equals J(G chi H_{t_j} o A) with
  // H_{t_j} o A = mu(A) e_j (kappa'(0) = I).
  GMatrixResult gm = solve_g_matrix(A, M, opts);
  const CircleGrid& g = A.grid();
  Eigen::VectorXd muA =
      dg.mu_values(A.w_boundary().samples(), A.x_component().samples().real());
  res.j_formula.resize(q, q);
  for (int j = 0; j < q; ++j) {
    Eigen::MatrixXd integrand(g.size(), q);
    for (int node = 0; node < g.size(); ++node) {
      Eigen::MatrixXd gmat = gm.g.real_matrix_at(node);
      integrand.row(node) =
          (dg.chi().scalar(node).real() * muA(node) * gmat.col(j)).transpose();
    }
    res.j_formula.col(j) = j_functional_vector(CircleFunction::real_vector(g, integrand));
  }
  res.max_cross_error = (res.d_prime - res.j_formula).cwiseAbs().maxCoeff();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(res.d_prime);
  res.singular_values = svd.singularValues();
  double thr = 1e-6 * std::max(1e-300, res.singular_values(0));
  for (int i = 0; i < q; ++i)
    if (res.singular_values(i) > thr) ++res.rank;
  return res;
}

std::pair<CircleFunction, CircleFunction> boundary_t_derivative(const AnalyticDisc& A,
                                                                const DeformedGraph& dg, int j,
                                                                double step,
                                                                const BishopOptions& opts) {
  const int q = dg.base().q();
  BishopOptions tight = opts;
  tight.tol = std::min(opts.tol, 1e-12);
  Eigen::VectorXd t = Eigen::VectorXd::Zero(q);
  t(j) = step;
  AnalyticDisc fwd = solve_at_t(A, dg, t, tight);
  t(j) = -step;
  AnalyticDisc bwd = solve_at_t(A, dg, t, tight);
  Eigen::MatrixXd xdot =
      (fwd.x_component().samples().real() - bwd.x_component().samples().real()) / (2.0 * step);
  Eigen::MatrixXd ydot =
      (fwd.y_component().samples().real() - bwd.y_component().samples().real()) / (2.0 * step);
  const CircleGrid& g = A.grid();
  return {CircleFunction::real_vector(g, xdot), CircleFunction::real_vector(g, ydot)};
}

KGraph::KGraph(int p, int q, Polynomial k) : p_(p), q_(q), k_(std::move(k)) {
  if (k_.nvars() != 2 * p - 1 + q)
    throw_config("bad-k-graph", "k must be a polynomial in (u1, w_2.., x)");
  if (k_.constant_term() != 0.0)
    throw_config("bad-k-graph", "k(0) = 0 required");
  for (const auto& t : k_.terms()) {
    int deg = 0;
    for (int e : t.expo) deg += e;
    if (deg == 1) throw_config("bad-k-graph", "dk(0) = 0 required");
  }
}

KGraph KGraph::trivial(int p, int q) { return KGraph(p, q, Polynomial::zero(2 * p - 1 + q)); }

double KGraph::v1(double u1, const Eigen::VectorXcd& w_rest, const Eigen::VectorXd& x) const {
  Eigen::VectorXd vars(2 * p_ - 1 + q_);
  vars(0) = u1;
  for (int k = 0; k < p_ - 1; ++k) {
    vars(1 + 2 * k) = w_rest(k).real();
    vars(2 + 2 * k) = w_rest(k).imag();
  }
  vars.tail(q_) = x;
  return k_(vars);
}

FamilyParams FamilyParams::zero(int p, int q) {
  FamilyParams par;
  par.t = Eigen::VectorXd::Zero(q);
  par.a = Eigen::VectorXcd::Zero(p - 1);
  par.w_rest = Eigen::VectorXcd::Zero(p - 1);
  par.x0 = Eigen::VectorXd::Zero(q);
  return par;
}

AnalyticDisc build_family(const AnalyticDisc& A, const GenericManifold& M,
                          const DeformedGraph* dg, const KGraph& K, const FamilyParams& par,
                          const FamilyBounds& bounds, const BishopOptions& opts) {
  const int p = M.p();
  if (par.t.size() != M.q() || par.a.size() != p - 1 || par.w_rest.size() != p - 1 ||
      par.x0.size() != M.q())
    throw_config("bad-parameters", "family parameter dimensions do not match (p, q)");
  if (!dg && par.t.norm() != 0.0)
    throw_config("bad-parameters", "t-deformation requested without a deformed graph");
  double p0_norm = std::hypot(par.u1, par.w_rest.norm(), par.x0.norm());
  if (par.t.norm() > bounds.t_max || std::abs(par.tau) > bounds.tau_max ||
      par.a.norm() > bounds.a_max || p0_norm > bounds.p0_max)
    throw_config("bad-parameters", "family parameters outside the configured smallness box");
  if (A.w_boundary().vector_at(0).norm() > 1e-12)
    throw_domain("precondition", "family construction requires w(1) = 0 for the base disc");

  const CircleGrid& g = A.grid();
  double v1 = K.v1(par.u1, par.w_rest, par.x0);
  cd rot = std::polar(1.0, par.tau);

  Eigen::MatrixXcd w = A.w_boundary().samples();
  for (int j = 0; j < g.size(); ++j) {
    w(j, 0) = rot * w(j, 0) + cd(par.u1, v1);
    for (int k = 1; k < p; ++k) w(j, k) += par.a(k - 1) * (g.node(j) - 1.0) + par.w_rest(k - 1);
  }
  GraphFn graph = dg ? dg->graph(par.t) : GraphFn{};
  return solve_bishop(M, CircleFunction::complex_vector(g, w), par.x0, opts, graph);
}

namespace {

std::vector<double> axis_grid(double extent, int count) {
  if (count <= 1 || extent == 0.0) return {0.0};
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(-extent + 2.0 * extent * i / (count - 1));
  return out;
}

// odometer over per-axis grids
bool advance(std::vector<size_t>& idx, const std::vector<size_t>& sizes) {
  for (size_t d = 0; d < idx.size(); ++d) {
    if (++idx[d] < sizes[d]) return true;
    idx[d] = 0;
  }
  return false;
}

ConeFit fit_cone(const Eigen::MatrixXd& dirs, const Eigen::VectorXd& v0, double margin) {
  ConeFit fit;
  fit.directions = dirs;
  for (int i = 0; i < fit.directions.rows(); ++i) {
    double n = fit.directions.row(i).norm();
    if (n > 0.0) fit.directions.row(i) /= n;
  }
  if (dirs.rows() == 0) return fit;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(fit.directions);
  double thr = 1e-8 * svd.singularValues()(0);
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++fit.rank;

  Eigen::MatrixXd cols = fit.directions.transpose();
  double eps = margin * v0.norm();
  fit.v0_inside = in_conic_hull(cols, v0);
  if (fit.v0_inside) {
    for (int d = 0; d < v0.size() && fit.v0_inside; ++d) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd probe = v0;
        probe(d) += sgn * eps;
        if (!in_conic_hull(cols, probe)) {
          fit.v0_inside = false;
          break;
        }
      }
    }
    fit.margin = fit.v0_inside ? eps : 0.0;
  }
  return fit;
}

// every direction of b lies outside the hull of a (and vice versa elsewhere)
bool cones_disjoint(const ConeFit& a, const ConeFit& b) {
  if (a.directions.rows() == 0 || b.directions.rows() == 0) return false;
  Eigen::MatrixXd acols = a.directions.transpose();
  Eigen::MatrixXd bcols = b.directions.transpose();
  for (int i = 0; i < b.directions.rows(); ++i)
    if (in_conic_hull(acols, b.directions.row(i).transpose())) return false;
  for (int i = 0; i < a.directions.rows(); ++i)
    if (in_conic_hull(bcols, a.directions.row(i).transpose())) return false;
  return true;
}

}  // namespace

WedgeSample sample_wedge(const AnalyticDisc& A, const GenericManifold& M,
                         const DeformedGraph* dg, const KGraph& K, const Submanifold* N,
                         const ParamBox& box, const ZetaArc& arc, const WedgeOptions& opts) {
  const int p = M.p(), q = M.q();
  const int chart = 2 * p + q;
  WedgeSample sample;
  sample.v0 = ambient_real(A.theta_derivative_at_one(), p, q).head(chart);

  if (box.t_count <= 0 || box.tau_count <= 0 || box.a_count <= 0 || box.p0_u1_count <= 0 ||
      box.p0_w_count <= 0 || box.p0_x_count <= 0)
    return sample;  // empty parameter box, empty sample

  std::vector<double> tg = axis_grid(box.t_extent, box.t_count);
  std::vector<double> taug = axis_grid(box.tau_extent, box.tau_count);
  std::vector<double> ag = axis_grid(box.a_extent, box.a_count);
  const double tau_split = box.tau_extent / 3.0;

  // ---- direction cloud over (t, tau, a) with p0 = 0
  std::vector<size_t> sizes;
  for (int i = 0; i < q; ++i) sizes.push_back(tg.size());
  sizes.push_back(taug.size());
  for (int i = 0; i < 2 * (p - 1); ++i) sizes.push_back(ag.size());

  struct DirDraw {
    FamilyParams par;
    int subbox;
  };
  std::vector<DirDraw> draws;
  std::vector<size_t> idx(sizes.size(), 0);
  do {
    FamilyParams par = FamilyParams::zero(p, q);
    int d = 0;
    for (int i = 0; i < q; ++i) par.t(i) = tg[idx[d++]];
    par.tau = taug[idx[d++]];
    for (int i = 0; i < p - 1; ++i) {
      double re = ag[idx[d++]];
      double im = ag[idx[d++]];
      par.a(i) = cd(re, im);
    }
    int subbox = 0;
    if (box.tau_extent > 0.0 && box.tau_count > 1) {
      if (par.tau >= tau_split) subbox = 1;
      else if (par.tau <= -tau_split) subbox = 2;
    }
    draws.push_back({std::move(par), subbox});
  } while (advance(idx, sizes));

  Eigen::MatrixXd dirs(draws.size(), chart);
  std::vector<int> dir_subbox(draws.size());
  for (size_t i = 0; i < draws.size(); ++i) {
    AnalyticDisc disc = build_family(A, M, dg, K, draws[i].par, opts.bounds, opts.bishop);
    if (disc.residual() > opts.attach_tolerance)
      throw_convergence("contraction-failure", "family disc exceeded the attachment tolerance");
    dirs.row(i) = ambient_real(disc.theta_derivative_at_one(), p, q).head(chart).transpose();
    dir_subbox[i] = draws[i].subbox;
  }
  sample.directions = dirs;

  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dirs);
    double thr = 1e-8 * std::max(1e-300, svd.singularValues()(0));
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > thr) ++rank;
    if (rank < chart)
      throw_domain("e-rank",
                   "direction cloud has rank " + std::to_string(rank) + " < 2p+q = " +
                       std::to_string(chart) +
                       "; the family derivative cannot reach rank 2p+q-1");
  }

  sample.cone = fit_cone(dirs, sample.v0, opts.cone_margin);
  auto subcloud = [&](int label) {
    int count = 0;
    for (int s : dir_subbox)
      if (s == label) ++count;
    Eigen::MatrixXd sub(count, chart);
    int r = 0;
    for (size_t i = 0; i < dir_subbox.size(); ++i)
      if (dir_subbox[i] == label) sub.row(r++) = dirs.row(i);
    return sub;
  };
  sample.cone_sub1 = fit_cone(subcloud(1), sample.v0, opts.cone_margin);
  sample.cone_sub2 = fit_cone(subcloud(2), sample.v0, opts.cone_margin);
  sample.subcones_disjoint = cones_disjoint(sample.cone_sub1, sample.cone_sub2);

  // ---- point cloud over the p0 grid and the zeta arc
  std::vector<double> u1g = axis_grid(box.p0_u1_extent, box.p0_u1_count);
  std::vector<double> wg = axis_grid(box.p0_w_extent, box.p0_w_count);
  std::vector<double> xg = axis_grid(box.p0_x_extent, box.p0_x_count);
  std::vector<size_t> psizes{u1g.size()};
  for (int i = 0; i < 2 * (p - 1); ++i) psizes.push_back(wg.size());
  for (int i = 0; i < q; ++i) psizes.push_back(xg.size());

  for (const auto& draw : draws) {
    std::vector<size_t> pidx(psizes.size(), 0);
    do {
      FamilyParams par = draw.par;
      int d = 0;
      par.u1 = u1g[pidx[d++]];
      for (int i = 0; i < p - 1; ++i) {
        double re = wg[pidx[d++]];
        double im = wg[pidx[d++]];
        par.w_rest(i) = cd(re, im);
      }
      for (int i = 0; i < q; ++i) par.x0(i) = xg[pidx[d++]];
      AnalyticDisc disc = build_family(A, M, dg, K, par, opts.bounds, opts.bishop);
      if (disc.residual() > opts.attach_tolerance)
        throw_convergence("contraction-failure",
                          "family disc exceeded the attachment tolerance");
      bool in_n = N != nullptr && N->eval(disc.boundary_point(0)).norm() <= opts.n_tolerance;
      sample.discs.push_back({par, disc, in_n, draw.subbox});

      int di = static_cast<int>(sample.discs.size()) - 1;
      for (int ir = 0; ir < arc.rho_count; ++ir) {
        double rho = arc.rho_min +
                     (arc.rho_max - arc.rho_min) *
                         (arc.rho_count > 1 ? static_cast<double>(ir) / (arc.rho_count - 1) : 0.5);
        for (int ia = 0; ia < arc.angle_count; ++ia) {
          double ang = arc.angle_count > 1
                           ? -arc.angle + 2.0 * arc.angle * ia / (arc.angle_count - 1)
                           : 0.0;
          cd zeta = std::polar(rho, ang);
          sample.points.push_back(
              {di, zeta, sample.discs[di].disc.eval(zeta), in_n, draw.subbox});
        }
      }
    } while (advance(pidx, psizes));
  }
  return sample;
}

}  // namespace disckit
