#include "disckit/bishop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "disckit/errors.hpp"

namespace disckit {

namespace {

Eigen::MatrixXd graph_values(const GenericManifold& M, const GraphFn& graph,
                             const Eigen::MatrixXcd& w, const Eigen::MatrixXd& x) {
  return graph ? graph(w, x) : M.h_values(w, x);
}

}  // namespace

AnalyticDisc solve_bishop(const GenericManifold& M, const CircleFunction& w,
                          const Eigen::VectorXd& x0, const BishopOptions& opts,
                          const GraphFn& graph) {
  if (w.rows() != M.p())
    throw_config("bad-disc", "w-component must have p entries");
  if (x0.size() != M.q())
    throw_config("bad-disc", "base offset must have q entries");
  if (fft(w).negative_mode_content() > 1e-10)
    throw_domain("not-holomorphic", "prescribed w-component is not holomorphic boundary data");

  const CircleGrid& g = w.grid();
  const int nodes = g.size(), q = M.q();
  const Eigen::MatrixXcd& ws = w.samples();

  Eigen::MatrixXd x;
  if (opts.initial_guess.size() > 0) {
    if (opts.initial_guess.rows() != nodes || opts.initial_guess.cols() != q)
      throw_config("bad-disc", "initial guess has wrong shape");
    x = opts.initial_guess;
  } else {
    x = Eigen::MatrixXd::Zero(nodes, q);
    x.rowwise() = x0.transpose();
  }

  double lambda = opts.damping;
  double prev_residual = std::numeric_limits<double>::infinity();
  double residual = prev_residual;
  Eigen::MatrixXd y;

  for (int it = 0; it < opts.max_iter; ++it) {
    y = graph_values(M, graph, ws, x);
    CircleFunction yf = CircleFunction::real_vector(g, y);
    Eigen::MatrixXd target = -hilbert_t1(yf).samples().real();
    target.rowwise() += x0.transpose();

    residual = (target - x).cwiseAbs().maxCoeff();
    if (residual > prev_residual) lambda = std::max(lambda * 0.5, 1.0 / 64.0);
    prev_residual = residual;

    x += lambda * (target - x);
    if (x.cwiseAbs().maxCoeff() > opts.trust_radius)
      throw_convergence("trust-region",
                        "Bishop iterates escaped the polynomial trust region |x| <= " +
                            std::to_string(opts.trust_radius));
    if (residual <= opts.tol) break;
  }
  if (residual > opts.tol)
    throw_convergence("contraction-failure",
                      "Bishop iteration did not converge; final residual " +
                          std::to_string(residual));

  y = graph_values(M, graph, ws, x);
  CircleFunction xf = CircleFunction::real_vector(g, x);
  CircleFunction yf = CircleFunction::real_vector(g, y);
  // final residual of the functional equation itself
  Eigen::MatrixXd check = x + hilbert_t1(yf).samples().real();
  check.rowwise() -= x0.transpose();
  return AnalyticDisc(w, xf, yf, check.cwiseAbs().maxCoeff());
}

CircleFunction section2_w(const CircleGrid& g, int p, double c) {
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(g.size(), p);
  for (int j = 0; j < g.size(); ++j) w(j, 0) = c * (1.0 - g.node(j));
  return CircleFunction::complex_vector(g, w);
}

std::vector<double> boundary_zeros(const CircleFunction& values) {
  const CircleGrid& g = values.grid();
  const int n = g.size();
  const double two_pi = 2.0 * std::numbers::pi;
  double scale = std::max(values.sup_norm(), 1e-30);
  const double node_tol = 1e-12 * scale;

  FourierCoefficients coef = fft(values);
  auto eval = [&](double theta) { return coef.eval(theta, 0).real(); };

  std::vector<double> roots;
  std::vector<bool> node_is_root(n, false);
  for (int j = 0; j < n; ++j) {
    if (std::abs(values.samples()(j, 0).real()) <= node_tol) {
      node_is_root[j] = true;
      roots.push_back(g.theta(j));
    }
  }
  for (int j = 0; j < n; ++j) {
    int jn = (j + 1) % n;
    if (node_is_root[j] || node_is_root[jn]) continue;
    double a = values.samples()(j, 0).real(), b = values.samples()(jn, 0).real();
    if (a * b >= 0.0) continue;
    double lo = g.theta(j), hi = g.theta(j) + g.theta(1);
    double flo = a;
    while (hi - lo > 1e-10) {
      double mid = 0.5 * (lo + hi);
      double fm = eval(mid);
      if (fm == 0.0) { lo = hi = mid; break; }
      if (flo * fm < 0.0)
        hi = mid;
      else {
        lo = mid;
        flo = fm;
      }
    }
    roots.push_back(std::fmod(0.5 * (lo + hi), two_pi));
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (!merged.empty() && r - merged.back() < 1e-8) continue;
    // identify 2pi with 0
    if (!merged.empty() && two_pi - r < 1e-8 && merged.front() < 1e-8) continue;
    merged.push_back(r);
  }
  return merged;
}

Section2Disc build_section2_disc(const GenericManifold& M, const Submanifold& M1, double c,
                                 const BishopOptions& opts, CircleGrid grid) {
  if (c <= 0.0) throw_config("bad-disc", "disc size c must be positive");
  if (M1.codim_in_m() != 1)
    throw_config("bad-submanifold", "M1 must have codimension 1 in M");
  if (M1.eval(M.base_point()).norm() > 1e-10)
    throw_domain("geometry", "M1 does not pass through the base point");

  CircleFunction w = section2_w(grid, M.p(), c);
  AnalyticDisc disc = [&] {
    try {
      return solve_bishop(M, w, Eigen::VectorXd::Zero(M.q()), opts);
    } catch (const Error& e) {
      if (e.code() == "trust-region" || e.code() == "contraction-failure")
        throw_domain("geometry", std::string("disc of size c is not solvable: ") + e.what());
      throw;
    }
  }();

  // M1-crossings along the boundary
  Eigen::VectorXd eq(grid.size());
  for (int j = 0; j < grid.size(); ++j) eq(j) = M1.eval(disc.boundary_point(j))(0);
  std::vector<double> crossings = boundary_zeros(CircleFunction::real_scalar(grid, eq));

  if (crossings.size() != 2)
    throw_domain("geometry", "boundary meets M1 at " + std::to_string(crossings.size()) +
                                 " points, expected exactly 2 (c too large or M1 degenerate)");
  if (std::min(crossings[0], 2.0 * std::numbers::pi - crossings[0]) > 1e-8)
    throw_domain("geometry", "no crossing at theta = 0");
  return Section2Disc{std::move(disc), std::move(crossings)};
}

Eigen::MatrixXd submanifold_tangent_basis(const Submanifold& N, const GenericManifold& M,
                                          const Eigen::VectorXcd& z) {
  const int chart = 2 * M.p() + M.q();
  Eigen::MatrixXd tm = M.tangent_basis(z);
  Eigen::MatrixXd grads = N.gradients(z);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(grads, Eigen::ComputeFullV);
  double thr = 1e-10 * std::max(1.0, svd.singularValues()(0));
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++rank;
  return tm * svd.matrixV().rightCols(chart - rank);
}

double subspace_distance(const Eigen::VectorXd& v, const Eigen::MatrixXd& basis) {
  if (v.norm() == 0.0) return 0.0;
  Eigen::VectorXd coeffs = basis.colPivHouseholderQr().solve(v);
  return (v - basis * coeffs).norm() / v.norm();
}

GoodDiscResult find_good_disc(const GenericManifold& M, const Submanifold& N,
                              const Submanifold& M1, double c, double delta,
                              const GoodDiscOptions& opts) {
  if (N.codim_in_m() < 2)
    throw_domain("precondition", "good-disc search requires codim_M N >= 2");
  auto tangency = tangency_check(N, M, M.base_point());
  if (tangency.contains_complex_tangent)
    throw_domain("precondition", "T_{z0} N contains T^c M; no good disc can exist");

  const CircleGrid& g = opts.grid;
  Eigen::MatrixXd tc = M.complex_tangent_basis(M.base_point());
  Eigen::MatrixXd tn = submanifold_tangent_basis(N, M, M.base_point());

  auto inspect = [&](const AnalyticDisc& disc) -> std::optional<GoodDiscResult> {
    // boundary crossings with M1 must stay at two
    Eigen::VectorXd eq(g.size());
    for (int j = 0; j < g.size(); ++j) eq(j) = M1.eval(disc.boundary_point(j))(0);
    std::vector<double> crossings = boundary_zeros(CircleFunction::real_scalar(g, eq));
    if (crossings.size() != 2) return std::nullopt;

    double clearance = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.size(); ++j) {
      double theta = g.theta(j);
      double arc = std::min(theta, 2.0 * std::numbers::pi - theta);
      if (arc < opts.exclusion_arc) continue;
      clearance = std::min(clearance, N.clearance(disc.boundary_point(j)));
    }
    if (clearance <= opts.clearance) return std::nullopt;

    Eigen::VectorXd v0 = ambient_real(disc.theta_derivative_at_one(), M.p(), M.q());
    double mtc = subspace_distance(v0, tc);
    double mtn = subspace_distance(v0, tn);
    if (mtc < opts.direction_threshold || mtn < opts.direction_threshold) return std::nullopt;

    GoodDiscResult res{disc,
                       std::move(crossings),
                       clearance,
                       disc.theta_derivative_at_one(),
                       mtc,
                       mtn,
                       Eigen::VectorXd()};
    return res;
  };

  Section2Disc base = build_section2_disc(M, M1, c, opts.bishop, g);
  double closest = 0.0;
  if (auto res = inspect(base.disc)) {
    res->perturbation = Eigen::VectorXd::Zero(2 * M.p());
    return *res;
  }

  // Perturb across the w-parameter slice: the second crossing sweeps a
  // neighborhood of A_c(theta_c) in M1 while A(1) = z0 stays pinned.
  std::mt19937 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int attempt = 0; attempt < opts.budget; ++attempt) {
    Eigen::VectorXd a(2 * M.p());
    for (int i = 0; i < a.size(); ++i) a(i) = delta * unit(rng);
    Eigen::MatrixXcd wpert = section2_w(g, M.p(), c).samples();
    for (int k = 0; k < M.p(); ++k) {
      cd coeff(a(2 * k), a(2 * k + 1));
      for (int j = 0; j < g.size(); ++j) wpert(j, k) += coeff * (g.node(j) - 1.0);
    }
    AnalyticDisc disc = solve_bishop(M, CircleFunction::complex_vector(g, wpert),
                                     Eigen::VectorXd::Zero(M.q()), opts.bishop);
    if (auto res = inspect(disc)) {
      res->perturbation = a;
      return *res;
    }
    double cl = std::numeric_limits<double>::infinity();
    for (int j = 1; j < g.size(); ++j)
      cl = std::min(cl, N.clearance(disc.boundary_point(j)));
    closest = std::max(closest, cl);
  }
  throw_convergence("no-good-disc",
                    "good-disc search budget exhausted; best clearance to N was " +
                        std::to_string(closest));
}

DiscFamily w_harmonic_family(const GenericManifold& M, const CircleFunction& base_w,
                             const Eigen::VectorXd& x0, int harmonics,
                             const BishopOptions& opts, const GraphFn& graph) {
  const CircleGrid g = base_w.grid();
  const int p = M.p();
  DiscFamily family;
  family.nparams = 2 * p * harmonics;
  family.solve = [=, &M](const Eigen::VectorXd& params) {
    Eigen::MatrixXcd w = base_w.samples();
    int idx = 0;
    for (int comp = 0; comp < p; ++comp) {
      for (int k = 1; k <= harmonics; ++k) {
        cd a(params(idx), params(idx + 1));
        idx += 2;
        if (a == cd(0, 0)) continue;
        for (int j = 0; j < g.size(); ++j)
          w(j, comp) += a * (std::pow(g.node(j), k) - 1.0);
      }
    }
    return solve_bishop(M, CircleFunction::complex_vector(g, w), x0, opts, graph);
  };
  return family;
}

Eigen::MatrixXd disc_jacobian(const DiscFamily& family,
                              const std::function<Eigen::VectorXd(const AnalyticDisc&)>& observable,
                              double step) {
  if (family.nparams == 0) return Eigen::MatrixXd();
  Eigen::MatrixXd jac;
  for (int i = 0; i < family.nparams; ++i) {
    Eigen::VectorXd param = Eigen::VectorXd::Zero(family.nparams);
    param(i) = step;
    Eigen::VectorXd fwd = observable(family.solve(param));
    param(i) = -step;
    Eigen::VectorXd bwd = observable(family.solve(param));
    if (jac.size() == 0) jac.resize(fwd.size(), family.nparams);
    jac.col(i) = (fwd - bwd) / (2.0 * step);
  }
  return jac;
}

std::function<Eigen::VectorXd(const AnalyticDisc&)> evaluation_observable(int node) {
  return [node](const AnalyticDisc& d) {
    return ambient_real(d.boundary_point(node), d.p(), d.q());
  };
}

std::function<Eigen::VectorXd(const AnalyticDisc&)> direction_observable() {
  return [](const AnalyticDisc& d) {
    return ambient_real(d.theta_derivative_at_one(), d.p(), d.q());
  };
}

}  // namespace disckit
