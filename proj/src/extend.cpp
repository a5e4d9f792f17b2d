#include "disckit/extend.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <numbers>

#include "disckit/errors.hpp"

namespace disckit {

double polydist(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

namespace {

// A'(zeta) for |zeta| <= 1 from the nonnegative boundary modes.
Eigen::VectorXcd disc_derivative(const FourierCoefficients& coef, cd zeta) {
  const int n = coef.size();
  Eigen::VectorXcd out(coef.components());
  for (int comp = 0; comp < coef.components(); ++comp) {
    cd acc = 0.0;
    for (int k = n / 2 - 1; k >= 1; --k)
      acc = acc * zeta + static_cast<double>(k) * coef.data()(k, comp);
    out(comp) = acc;
  }
  return out;
}

}  // namespace

std::pair<double, double> bilipschitz_constants(const AnalyticDisc& A) {
  CircleFunction boundary = A.boundary();
  FourierCoefficients coef = fft(boundary);
  const int n = A.grid().size();

  std::vector<cd> zetas;
  const int bstride = std::max(1, n / 64);
  for (int j = 0; j < n; j += bstride) zetas.push_back(A.grid().node(j));
  for (double rho : {0.25, 0.5, 0.75}) {
    for (int a = 0; a < 32; ++a)
      zetas.push_back(std::polar(rho, 2.0 * std::numbers::pi * a / 32.0));
  }
  zetas.push_back(0.0);

  std::vector<Eigen::VectorXcd> points(zetas.size());
  double lower = std::numeric_limits<double>::infinity(), upper = 0.0;
  for (size_t i = 0; i < zetas.size(); ++i) {
    Eigen::VectorXcd val(coef.components());
    for (int comp = 0; comp < coef.components(); ++comp) {
      cd acc = 0.0;
      for (int k = n / 2 - 1; k >= 0; --k) acc = acc * zetas[i] + coef.data()(k, comp);
      val(comp) = acc;
    }
    points[i] = val;
    double dnorm = disc_derivative(coef, zetas[i]).norm();
    lower = std::min(lower, dnorm);
    upper = std::max(upper, dnorm);
  }
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      double dz = std::abs(zetas[i] - zetas[j]);
      if (dz < 1e-12) continue;
      double ratio = (points[i] - points[j]).norm() / dz;
      lower = std::min(lower, ratio);
      upper = std::max(upper, ratio);
    }
  }
  if (lower < 1e-8 * std::max(upper, 1.0))
    throw_domain("non-embedded", "disc is not embedded: lower bi-Lipschitz constant " +
                                     std::to_string(lower));
  return {lower, upper};
}

namespace {

struct CenterSpec {
  cd zeta;
  Eigen::VectorXcd z;
};

std::vector<CenterSpec> chain_centers(const AnalyticDisc& A, double sigma, double upper,
                                      int max_centers) {
  // spacing in zeta so that consecutive images stay within sigma / 2
  double h = std::min(0.5 * sigma / upper, 0.2);
  std::vector<CenterSpec> specs;
  int rings = static_cast<int>(std::ceil(1.0 / h));
  for (int rix = 0; rix <= rings; ++rix) {
    double rho = 1.0 - static_cast<double>(rix) / rings;
    if (rho <= 0.0) {
      specs.push_back({cd(0, 0), A.eval(cd(0, 0))});
      break;
    }
    int count = std::max(8, static_cast<int>(std::ceil(2.0 * std::numbers::pi * rho / h)));
    for (int a = 0; a < count; ++a) {
      cd zeta = std::polar(rho, 2.0 * std::numbers::pi * a / count);
      Eigen::VectorXcd z = rho == 1.0 ? A.boundary_point(0) : A.eval(zeta);
      if (rho == 1.0) {
        // exact boundary node when available, interpolant otherwise
        double theta = 2.0 * std::numbers::pi * a / count;
        FourierCoefficients coef = fft(A.boundary());
        Eigen::VectorXcd val(coef.components());
        for (int comp = 0; comp < coef.components(); ++comp)
          val(comp) = coef.eval(theta, comp);
        z = val;
      }
      specs.push_back({zeta, z});
      if (static_cast<int>(specs.size()) > max_centers)
        throw_config("chain-resolution",
                     "polydisc chain needs more than " + std::to_string(max_centers) +
                         " centers; omega is too thin for this disc");
    }
  }
  return specs;
}

void propagate_and_check(PolydiscChain& chain, const ChainOptions& opts) {
  const double sigma = chain.sigma;
  const size_t nc = chain.centers.size();

  // overlap edges
  for (size_t i = 0; i < nc; ++i)
    for (size_t j = i + 1; j < nc; ++j)
      if (polydist(chain.centers[i].z, chain.centers[j].z) <= 0.9 * sigma)
        chain.overlap_edges.push_back({static_cast<int>(i), static_cast<int>(j)});

  std::vector<std::vector<int>> adj(nc);
  for (auto [i, j] : chain.overlap_edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }

  // Transport: every center adopts the germ of the seed that minimizes
  // distance / seed-radius over graph-reachable seeds. The ratio controls the
  // floating-point amplification (D / rho)^degree of re-expanded
  // coefficients, so the cheapest seed is the numerically soundest one.
  std::vector<int> origin(nc, -1);
  std::vector<double> cost(nc, std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (size_t i = 0; i < nc; ++i) {
    if (chain.centers[i].germ_radius > 0.0) {  // direct seed or cross-chain seed
      origin[i] = static_cast<int>(i);
      cost[i] = 0.0;
      heap.push({0.0, static_cast<int>(i)});
    }
  }
  while (!heap.empty()) {
    auto [c, i] = heap.top();
    heap.pop();
    if (c > cost[i]) continue;
    for (int j : adj[i]) {
      int seed = origin[i];
      double rho = chain.centers[seed].germ_radius;
      double cand = polydist(chain.centers[j].z, chain.centers[seed].z) / rho;
      if (cand < cost[j]) {
        cost[j] = cand;
        origin[j] = seed;
        heap.push({cand, j});
      }
    }
  }
  for (size_t i = 0; i < nc; ++i) {
    if (origin[i] < 0)
      throw_config("chain-disconnected",
                   "polydisc chain has centers unreachable from the seeded boundary");
    if (origin[i] == static_cast<int>(i)) continue;
    chain.centers[i].germ = chain.centers[origin[i]].germ.shifted(chain.centers[i].z);
    chain.centers[i].germ_radius = chain.centers[origin[i]].germ_radius;
  }

  // divergence proxy on transported germs
  for (size_t i = 0; i < nc; ++i) {
    if (chain.centers[i].seeded_from_f) continue;
    if (chain.centers[i].germ.looks_divergent(sigma))
      throw_domain("monodromy",
                   "transported germ diverges at center " + std::to_string(i) +
                       "; the function does not continue single-valuedly across the chain");
  }

  // germ agreement on overlaps
  int worst_i = -1, worst_j = -1;
  for (auto [i, j] : chain.overlap_edges) {
    Eigen::VectorXcd mid = 0.5 * (chain.centers[i].z + chain.centers[j].z);
    cd a = chain.centers[i].germ.eval(mid);
    cd b = chain.centers[j].germ.eval(mid);
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    double dis = std::abs(a - b) / scale;
    if (dis > chain.max_overlap_disagreement) {
      chain.max_overlap_disagreement = dis;
      worst_i = i;
      worst_j = j;
    }
  }
  if (chain.max_overlap_disagreement > opts.overlap_tol)
    throw_domain("monodromy",
                 "germ values disagree on an overlap by " +
                     std::to_string(chain.max_overlap_disagreement) + " (centers " +
                     std::to_string(worst_i) + (chain.centers[worst_i].seeded_from_f ? "s" : "t") +
                     ", " + std::to_string(worst_j) +
                     (chain.centers[worst_j].seeded_from_f ? "s" : "t") +
                     "); evidence of multivaluedness");
}

}  // namespace

std::optional<cd> PolydiscChain::eval(const Eigen::VectorXcd& z) const {
  int best = -1;
  double bestd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < centers.size(); ++i) {
    double d = polydist(centers[i].z, z);
    if (d < bestd) {
      bestd = d;
      best = static_cast<int>(i);
    }
  }
  if (best < 0 || bestd > sigma) return std::nullopt;
  return centers[best].germ.eval(z);
}

PolydiscChain continuity_extend(const Evaluator& f, const AnalyticDisc& A,
                                const OmegaDistance& omega_dist, const ChainOptions& opts) {
  PolydiscChain chain;
  double r = std::numeric_limits<double>::infinity();
  for (int j = 0; j < A.grid().size(); ++j)
    r = std::min(r, omega_dist(A.boundary_point(j)));
  if (r <= 0.0) {
    chain.trivial = true;  // the lemma is trivial when r = 0
    return chain;
  }
  auto [lower, upper] = bilipschitz_constants(A);
  chain.r = r;
  chain.lower = lower;
  chain.upper = upper;
  chain.sigma = r * lower / (2.0 * upper);

  const double root_n = std::sqrt(static_cast<double>(A.n()));
  for (const auto& spec : chain_centers(A, chain.sigma, upper, opts.max_centers)) {
    ChainCenter c{spec.z, spec.zeta, false, 0.0,
                  TaylorGerm(spec.z, opts.germ_degree)};
    double inside = omega_dist(spec.z);
    // Seed only where omega leaves real room: a Cauchy germ sampled on a tiny
    // polydisc amplifies round-off like (D / rho)^degree once transported.
    if (inside >= 0.5 * r) {
      double rho = 0.45 * inside / root_n;  // keeps the closed polydisc in omega
      c.germ = TaylorGerm::from_function(f, spec.z, opts.germ_degree, rho, opts.quadrature);
      c.seeded_from_f = true;
      c.germ_radius = rho;
    }
    chain.centers.push_back(std::move(c));
  }
  propagate_and_check(chain, opts);
  return chain;
}

FamilyChainResult continuity_extend_family(const Evaluator& f,
                                           const std::vector<AnalyticDisc>& discs,
                                           const OmegaDistance& omega_dist,
                                           const ChainOptions& opts) {
  if (discs.empty()) throw_config("bad-family", "family extension needs at least one disc");
  FamilyChainResult result;
  double terminal_margin = std::numeric_limits<double>::infinity();
  std::optional<PolydiscChain> prev;
  for (int k = static_cast<int>(discs.size()) - 1; k >= 0; --k) {
    const AnalyticDisc& A = discs[k];
    PolydiscChain chain;
    double r = std::numeric_limits<double>::infinity();
    for (int j = 0; j < A.grid().size(); ++j)
      r = std::min(r, omega_dist(A.boundary_point(j)));
    if (r <= 0.0)
      throw_domain("precondition", "family disc boundary leaves omega");
    auto [lower, upper] = bilipschitz_constants(A);
    chain.r = r;
    chain.lower = lower;
    chain.upper = upper;
    chain.sigma = r * lower / (2.0 * upper);

    const double root_n = std::sqrt(static_cast<double>(A.n()));
    for (const auto& spec : chain_centers(A, chain.sigma, upper, opts.max_centers)) {
      ChainCenter c{spec.z, spec.zeta, false, 0.0, TaylorGerm(spec.z, opts.germ_degree)};
      double inside = omega_dist(spec.z);
      if (inside >= 0.5 * r) {
        double rho = 0.45 * inside / root_n;
        c.germ = TaylorGerm::from_function(f, spec.z, opts.germ_degree, rho, opts.quadrature);
        c.seeded_from_f = true;
        c.germ_radius = rho;
      } else if (prev) {
        // Prop 3.3 induction: the previous chain seeds this disc where its
        // polydiscs reach
        int best = -1;
        double bestd = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < prev->centers.size(); ++i) {
          double d = polydist(prev->centers[i].z, spec.z);
          if (d < bestd) {
            bestd = d;
            best = static_cast<int>(i);
          }
        }
        if (best >= 0 && bestd <= 0.9 * prev->sigma) {
          c.germ = prev->centers[best].germ.shifted(spec.z);
          c.germ_radius = prev->centers[best].germ_radius;
        }
      }
      chain.centers.push_back(std::move(c));
    }
    propagate_and_check(chain, opts);

    if (k == static_cast<int>(discs.size()) - 1) {
      for (const auto& c : chain.centers)
        terminal_margin = std::min(terminal_margin, omega_dist(c.z));
    }
    prev = std::move(chain);
  }
  result.first = std::move(*prev);
  // the terminal closure must sit inside omega with a cushion of two
  // polydisc radii at the chain scale
  result.thin_margin = terminal_margin < 2.0 * result.first.sigma;
  return result;
}

namespace {

AnalyticDisc solve_shifted(const GenericManifold& M, const CircleFunction& w,
                           const Eigen::VectorXd& x0, const BishopOptions& opts) {
  return solve_bishop(M, w, x0, opts);
}

CircleFunction shrink_w(const CircleFunction& w, double s) {
  Eigen::MatrixXcd samples = w.samples();
  Eigen::RowVectorXcd base = samples.row(0);
  samples = (1.0 - s) * (samples.rowwise() - base);
  samples.rowwise() += base;
  return CircleFunction::complex_vector(w.grid(), samples);
}

CircleFunction translate_w(const CircleFunction& w, const Eigen::VectorXcd& offset) {
  Eigen::MatrixXcd samples = w.samples();
  samples.rowwise() += offset.transpose();
  return CircleFunction::complex_vector(w.grid(), samples);
}

Eigen::VectorXcd chart_w(const Eigen::VectorXd& chart, int p) {
  Eigen::VectorXcd w(p);
  for (int k = 0; k < p; ++k) w(k) = cd(chart(k), chart(p + k));
  return w;
}

}  // namespace

IsotopyPath isotopy_to_point(const AnalyticDisc& A, const GenericManifold& M,
                             const PhiOracle& phi, IsotopyRecipe recipe, const BaseCurve& curve,
                             const IsotopyOptions& opts) {
  const int p = M.p();
  if ((recipe == IsotopyRecipe::MoveBase || recipe == IsotopyRecipe::Combined) && !curve)
    throw_config("bad-isotopy", "move-base recipes need a base curve");

  Eigen::VectorXd base_chart = chart_of(A.base_point(), p, M.q());
  if (curve) {
    Eigen::VectorXd start = curve(0.0);
    if ((start - base_chart).norm() > 1e-8)
      throw_config("bad-isotopy", "base curve must start at the chart of A(1)");
  }

  // disc at path parameter s, per recipe
  auto disc_at = [&](double s) -> AnalyticDisc {
    switch (recipe) {
      case IsotopyRecipe::ShrinkW: {
        CircleFunction w = shrink_w(A.w_boundary(), s);
        return solve_shifted(M, w, A.x_component().real_vector_at(0), opts.bishop);
      }
      case IsotopyRecipe::MoveBase: {
        Eigen::VectorXd c = curve(s);
        Eigen::VectorXcd offset = chart_w(c, p) - chart_w(base_chart, p);
        CircleFunction w = translate_w(A.w_boundary(), offset);
        return solve_shifted(M, w, c.tail(M.q()), opts.bishop);
      }
      case IsotopyRecipe::Combined: {
        // base relocation on [0, 1/2], then shrink at the relocated base
        double s1 = std::min(2.0 * s, 1.0);
        Eigen::VectorXd c = curve(s1);
        Eigen::VectorXcd offset = chart_w(c, p) - chart_w(base_chart, p);
        CircleFunction w = translate_w(A.w_boundary(), offset);
        if (s > 0.5) w = shrink_w(w, 2.0 * s - 1.0);
        return solve_shifted(M, w, c.tail(M.q()), opts.bishop);
      }
    }
    throw_config("bad-isotopy", "unknown recipe");
  };

  auto run = [&](int steps, bool record) {
    IsotopyPath path;
    for (int i = 0; i <= steps; ++i) {
      double s = static_cast<double>(i) / steps;
      AnalyticDisc disc = disc_at(s);
      double clearance = std::numeric_limits<double>::infinity();
      int worst = 0;
      for (int j = 0; j < disc.grid().size(); ++j) {
        double d = phi(disc.boundary_point(j));
        if (d < clearance) {
          clearance = d;
          worst = j;
        }
      }
      bool terminal_point = (recipe != IsotopyRecipe::MoveBase) && i == steps;
      if (clearance <= opts.clearance_min && !terminal_point)
        throw_convergence("isotopy-blocked",
                          "isotopy blocked at s = " + std::to_string(s) +
                              "; boundary node " + std::to_string(worst) +
                              " is within " + std::to_string(clearance) +
                              " of the singular set");
      if (record) {
        path.s_values.push_back(s);
        path.clearances.push_back(clearance);
        path.discs.push_back(std::move(disc));
      }
    }
    return path;
  };

  IsotopyPath path = run(opts.steps, true);
  path.terminal_diameter = path.discs.back().boundary_diameter();
  if (recipe != IsotopyRecipe::MoveBase && path.terminal_diameter > 1e-9)
    throw_convergence("isotopy-blocked",
                      "terminal disc is not a point; diameter " +
                          std::to_string(path.terminal_diameter));
  run(2 * opts.steps, false);  // re-validate clearances on the refined grid
  path.refined_ok = true;
  return path;
}

CauchyExtensionResult cauchy_extension(const Evaluator& f, const WedgeSample& sample,
                                       const CauchyOptions& opts) {
  CauchyExtensionResult res;
  res.values.assign(sample.points.size(), std::nullopt);

  std::vector<std::optional<FourierCoefficients>> per_disc(sample.discs.size());
  for (size_t d = 0; d < sample.discs.size(); ++d) {
    const auto& fd = sample.discs[d];
    DiscExtension ext;
    ext.disc_index = static_cast<int>(d);
    if (fd.p0_in_n) {
      ext.status = DiscExtendStatus::MeetsSingularity;
      ++res.meets_singularity_count;
      res.discs.push_back(ext);
      continue;
    }
    const CircleGrid& g = fd.disc.grid();
    Eigen::VectorXcd comp(g.size());
    bool finite = true;
    for (int j = 0; j < g.size() && finite; ++j) {
      comp(j) = f(fd.disc.boundary_point(j));
      finite = std::isfinite(comp(j).real()) && std::isfinite(comp(j).imag());
    }
    if (!finite) {
      ext.status = DiscExtendStatus::MeetsSingularity;
      ++res.meets_singularity_count;
      res.discs.push_back(ext);
      continue;
    }
    FourierCoefficients coef = fft(CircleFunction::complex_scalar(g, comp));
    ext.negative_content = coef.negative_mode_content();
    if (ext.negative_content > opts.content_threshold) {
      ext.status = DiscExtendStatus::NonExtendible;
      ++res.nonextendible_count;
      res.discs.push_back(ext);
      if (opts.throw_on_nonextendible)
        throw_domain("non-extendible-boundary",
                     "f along disc " + std::to_string(d) + " carries negative modes " +
                         std::to_string(ext.negative_content) +
                         "; no holomorphic extension through the disc");
      continue;
    }
    per_disc[d] = std::move(coef);
    ++res.extended_count;
    res.discs.push_back(ext);
  }

  for (size_t i = 0; i < sample.points.size(); ++i) {
    const auto& pt = sample.points[i];
    const auto& coef = per_disc[pt.disc_index];
    if (!coef) continue;
    const int n = coef->size();
    cd acc = 0.0;
    for (int k = n / 2 - 1; k >= 0; --k) acc = acc * pt.zeta + coef->data()(k, 0);
    res.values[i] = acc;
  }

  // well-definedness at near-coincident points from different discs
  double diam = 0.0;
  for (size_t i = 0; i < sample.points.size(); ++i)
    for (size_t j = i + 1; j < sample.points.size(); j += 7)
      diam = std::max(diam, (sample.points[i].z - sample.points[j].z).norm());
  res.pair_distance_scale = opts.pair_radius_factor * diam;
  for (size_t i = 0; i < sample.points.size(); ++i) {
    if (!res.values[i]) continue;
    for (size_t j = i + 1; j < sample.points.size(); ++j) {
      if (!res.values[j]) continue;
      if (sample.points[i].disc_index == sample.points[j].disc_index) continue;
      double dist = (sample.points[i].z - sample.points[j].z).norm();
      if (dist > res.pair_distance_scale) continue;
      res.max_pair_spread =
          std::max(res.max_pair_spread, std::abs(*res.values[i] - *res.values[j]));
    }
  }
  return res;
}

MaximallyRealPatch real_plane_patch(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  MaximallyRealPatch L;
  L.lo = lo;
  L.hi = hi;
  const int n = static_cast<int>(lo.size());
  L.chart = [n](const Eigen::VectorXd& u) { return u.cast<cd>().eval(); };
  L.jacobian = [n](const Eigen::VectorXd&) {
    return Eigen::MatrixXcd::Identity(n, n).eval();
  };
  return L;
}

MaximallyRealPatch translated_patch(const MaximallyRealPatch& L, const Eigen::VectorXcd& offset,
                                    double c1_bound) {
  if (offset.norm() > c1_bound)
    throw_config("bad-patch", "patch translation exceeds the configured C1 bound");
  MaximallyRealPatch out = L;
  auto chart = L.chart;
  out.chart = [chart, offset](const Eigen::VectorXd& u) {
    return (chart(u) + offset).eval();
  };
  return out;
}

void gauss_legendre(int order, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  nodes.resize(order);
  weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    nodes(i) = -x;
    nodes(order - 1 - i) = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights(i) = w;
    weights(order - 1 - i) = w;
  }
}

namespace {

cd gauss_quadrature_pass(const Evaluator& f, const MaximallyRealPatch& L,
                         const Eigen::VectorXcd& zhat, double tau, int order) {
  const int n = static_cast<int>(L.lo.size());
  Eigen::VectorXd nodes, weights;
  gauss_legendre(order, nodes, weights);

  std::vector<int> idx(n, 0);
  Eigen::VectorXd u(n);
  cd total = 0.0;
  bool done = false;
  while (!done) {
    double wprod = 1.0;
    for (int l = 0; l < n; ++l) {
      double half = 0.5 * (L.hi(l) - L.lo(l));
      u(l) = L.lo(l) + half * (nodes(idx[l]) + 1.0);
      wprod *= weights(idx[l]) * half;
    }
    Eigen::VectorXcd z = L.chart(u);
    cd square = 0.0;
    for (int l = 0; l < n; ++l) {
      cd d = z(l) - zhat(l);
      square += d * d;
    }
    cd det = L.jacobian(u).determinant();
    total += wprod * std::exp(-tau * square) * f(z) * det;

    done = true;
    for (int l = 0; l < n; ++l) {
      if (++idx[l] < order) {
        done = false;
        break;
      }
      idx[l] = 0;
    }
  }
  return std::pow(tau / std::numbers::pi, 0.5 * n) * total;
}

}  // namespace

cd gauss_approx(const Evaluator& f, const MaximallyRealPatch& L, const Eigen::VectorXcd& zhat,
                double tau, int order, double richardson_tol) {
  if (tau <= 0.0) throw_config("bad-parameters", "tau must be positive");
  cd coarse = gauss_quadrature_pass(f, L, zhat, tau, order);
  cd fine = gauss_quadrature_pass(f, L, zhat, tau, order + order / 2);
  double scale = std::max(1.0, std::abs(fine));
  if (std::abs(fine - coarse) > richardson_tol * scale)
    throw_convergence("quadrature", "Gauss-Legendre refinement moved the value by " +
                                        std::to_string(std::abs(fine - coarse)) +
                                        "; quadrature has not converged");
  return fine;
}

RemovabilityReport removability_experiment(const Scenario& sc) {
  RemovabilityReport rep;
  auto stage = [&rep](const std::string& name, auto&& fn) {
    try {
      auto out = fn();
      rep.stages_completed += (rep.stages_completed.empty() ? "" : ",") + name;
      return out;
    } catch (const Error& e) {
      throw Error(e.error_class(), e.code(), "stage " + name + ": " + e.what());
    }
  };

  GoodDiscResult good = stage("good-disc", [&] {
    return find_good_disc(sc.M, sc.N, sc.M1, sc.c, sc.delta, sc.good);
  });
  rep.good_disc_params = good.perturbation;
  rep.good_disc_clearance = good.n_clearance;
  rep.crossings = good.crossings;

  DefectReport defect = stage("defect", [&] {
    DefiningData dd = build_defining_data(sc.M);
    NuFactorization fac = factor_nu(good.disc, sc.M, dd);
    return compute_defect(good.disc, sc.M, fac);
  });
  rep.defect = defect.defect;

  WedgeSample sample = stage("wedge", [&] {
    DeformedGraph dg(sc.M, good.disc);
    return sample_wedge(good.disc, sc.M, &dg, sc.K, &sc.N, sc.box, sc.arc, sc.wedge);
  });
  rep.wedge_points = static_cast<int>(sample.points.size());
  rep.wedge_discs = static_cast<int>(sample.discs.size());
  rep.cone_contains_v0 = sample.cone.v0_inside;

  CauchyExtensionResult ext = stage("extension", [&] {
    CauchyOptions copts;
    copts.content_threshold = sc.content_threshold;
    return cauchy_extension(sc.f, sample, copts);
  });
  rep.extended_count = ext.extended_count;
  rep.max_pair_spread = ext.max_pair_spread;
  for (const auto& d : ext.discs)
    if (d.status == DiscExtendStatus::NonExtendible)
      rep.nonextendible_discs.push_back(d.disc_index);

  stage("comparison", [&] {
    for (size_t i = 0; i < sample.points.size(); ++i) {
      if (!ext.values[i]) continue;
      cd truth = sc.truth(sample.points[i].z);
      rep.max_extension_error =
          std::max(rep.max_extension_error, std::abs(*ext.values[i] - truth));
    }
    return 0;
  });
  return rep;
}

}  // namespace disckit
