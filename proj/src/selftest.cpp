#include "disckit/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "disckit/extend.hpp"
#include "disckit/linprog.hpp"
#include "disckit/scenario.hpp"

namespace disckit {

namespace {

GenericManifold quadric_manifold(int p, int q) {
  const int nv = 2 * p + q;
  Polynomial levi = Polynomial::zero(nv);
  for (int k = 0; k < p; ++k) {
    std::vector<int> eu(nv, 0), ev(nv, 0);
    eu[k] = 2;
    ev[p + k] = 2;
    levi = levi + Polynomial::monomial(nv, 1.0, eu) + Polynomial::monomial(nv, 1.0, ev);
  }
  std::vector<Polynomial> h{levi};
  for (int j = 1; j < q; ++j) h.push_back(Polynomial::zero(nv));
  return GenericManifold(p, q, h);
}

GenericManifold flat_manifold(int p, int q) {
  return GenericManifold(p, q, std::vector<Polynomial>(q, Polynomial::zero(2 * p + q)));
}

}  // namespace

SelftestResult run_selftest(const std::vector<std::string>& scenario_paths) {
  SelftestResult result;
  auto check = [&result](const std::string& name, const std::function<std::string()>& body) {
    try {
      std::string msg = body();  // empty string means pass
      result.checks.push_back({name, msg.empty()});
      result.messages.push_back(msg.empty() ? "ok" : msg);
    } catch (const std::exception& e) {
      result.checks.push_back({name, false});
      result.messages.push_back(e.what());
    }
  };

  CircleGrid g(512);

  check("hilbert-conjugate-pairs", [&] {
    for (int k : {1, 8, 64}) {
      auto u = CircleFunction::from_theta(g, [k](double t) { return std::cos(k * t); });
      auto tu = hilbert_t1(u);
      for (int j = 0; j < g.size(); ++j)
        if (std::abs(tu.scalar(j).real() - std::sin(k * g.theta(j))) > 1e-12)
          return std::string("T1 cos failed at k=" + std::to_string(k));
    }
    return std::string();
  });

  check("hilbert-involution", [&] {
    std::mt19937 rng(4);
    std::normal_distribution<double> dist;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g.size());
    for (int k = 1; k <= 40; ++k) {
      double a = dist(rng), b = dist(rng);
      for (int j = 0; j < g.size(); ++j)
        v(j) += a * std::cos(k * g.theta(j)) + b * std::sin(k * g.theta(j));
    }
    auto u = CircleFunction::real_scalar(g, v);
    auto ttu = hilbert_t1(hilbert_t1(u));
    Eigen::VectorXcd expect = -u.samples().col(0).array() + u.samples()(0, 0);
    if ((ttu.samples().col(0) - expect).cwiseAbs().maxCoeff() > 1e-10 * u.sup_norm())
      return std::string("involution failed");
    if (hilbert_t1(u).samples()(0, 0) != cd(0, 0)) return std::string("T1 u (1) not exactly 0");
    return std::string();
  });

  check("j-functional-product-identity", [&] {
    std::mt19937 rng(5);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd a = Eigen::VectorXd::Zero(g.size()), b = a;
      for (int k = 1; k <= 30; ++k) {
        double c1 = dist(rng), s1 = dist(rng), c2 = dist(rng), s2 = dist(rng);
        for (int j = 0; j < g.size(); ++j) {
          a(j) += c1 * std::cos(k * g.theta(j)) + s1 * std::sin(k * g.theta(j));
          b(j) += c2 * std::cos(k * g.theta(j)) + s2 * std::sin(k * g.theta(j));
        }
      }
      a.array() -= a(0);
      b.array() -= b(0);
      auto af = CircleFunction::real_scalar(g, a);
      auto bf = CircleFunction::real_scalar(g, b);
      auto ta = hilbert_t1(af), tb = hilbert_t1(bf);
      Eigen::VectorXd prod =
          (a.cwiseProduct(b) - ta.samples().col(0).real().cwiseProduct(tb.samples().col(0).real()));
      if (std::abs(j_functional(CircleFunction::real_scalar(g, prod))) > 1e-8 * (1 + prod.cwiseAbs().maxCoeff()))
        return std::string("J(gg' - T1g T1g') identity failed");
    }
    return std::string();
  });

  auto Mq = quadric_manifold(1, 1);
  check("bishop-closed-form", [&] {
    double c = 0.03;
    auto disc = solve_bishop(Mq, section2_w(g, 1, c), Eigen::VectorXd::Zero(1));
    for (int j = 0; j < g.size(); ++j) {
      cd expect = cd(0, 2 * c * c) * (1.0 - g.node(j));
      cd zj = disc.x_component().scalar(j) + cd(0, 1) * disc.y_component().scalar(j);
      if (std::abs(zj - expect) > 1e-10) return std::string("closed form violated");
    }
    if (disc.attachment_residual(Mq) > 1e-9) return std::string("attachment residual too large");
    return std::string();
  });

  check("bishop-scaling-law", [&] {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double c = 1e-3; c <= 5e-2; c *= 2.0, ++n) {
      auto disc = solve_bishop(Mq, section2_w(g, 1, c), Eigen::VectorXd::Zero(1));
      double lx = std::log(c), ly = std::log(disc.x_component().sup_norm());
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (std::abs(slope - 2.0) > 0.01)
      return "scaling slope " + std::to_string(slope) + " not 2.00 +- 0.01";
    return std::string();
  });

  check("defect-trio", [&] {
    auto dd = build_defining_data(Mq);
    Eigen::MatrixXcd zero_w = Eigen::MatrixXcd::Zero(g.size(), 1);
    auto constant = solve_bishop(Mq, CircleFunction::complex_vector(g, zero_w),
                                 Eigen::VectorXd::Zero(1));
    if (compute_defect(constant, Mq, factor_nu(constant, Mq, dd)).defect != 1)
      return std::string("constant disc defect != q");

    auto Mf = flat_manifold(1, 1);
    auto ddf = build_defining_data(Mf);
    auto fdisc = solve_bishop(Mf, section2_w(g, 1, 0.05), Eigen::VectorXd::Zero(1));
    if (compute_defect(fdisc, Mf, factor_nu(fdisc, Mf, ddf)).defect != 1)
      return std::string("flat disc defect != q");

    auto qdisc = solve_bishop(Mq, section2_w(g, 1, 0.05), Eigen::VectorXd::Zero(1));
    auto rep = compute_defect(qdisc, Mq, factor_nu(qdisc, Mq, dd));
    if (rep.defect != 0) return std::string("quadric disc defect != 0");
    for (int d : rep.per_zeta_defects)
      if (d != 0) return std::string("zeta-independence violated");
    return std::string();
  });

  check("deformation-rank-law", [&] {
    auto A = solve_bishop(Mq, section2_w(g, 1, 0.05), Eigen::VectorXd::Zero(1));
    DeformedGraph dg(Mq, A);
    if (std::abs(j_functional(dg.chi()) - 1.0) > 1e-8)
      return std::string("chi normalization failed");
    auto res = normal_derivative_map(A, dg);
    if (res.rank != 1) return std::string("rank D'(0) != q");
    if (res.max_cross_error > 1e-6)
      return "Eq-21 cross-check error " + std::to_string(res.max_cross_error);
    return std::string();
  });

  check("g-matrix-identity", [&] {
    // y = x1 |w1|^2 couples x into the graph
    const int nv = 3;
    Polynomial h = (Polynomial::monomial(nv, 1.0, {2, 0, 0}) +
                    Polynomial::monomial(nv, 1.0, {0, 2, 0})) *
                   Polynomial::variable(nv, 2);
    GenericManifold Mx(1, 1, {h});
    auto A = solve_bishop(Mx, section2_w(g, 1, 0.05), Eigen::VectorXd::Zero(1));
    auto gm = solve_g_matrix(A, Mx);
    CircleFunction hx = Mx.hx_function(g, A.w_boundary().samples(),
                                       A.x_component().samples().real());
    auto lhs = hilbert_t1(gm.g);
    auto rhs = nodewise_product(gm.g, hx);
    if ((lhs.samples() + rhs.samples()).cwiseAbs().maxCoeff() > 1e-9)
      return std::string("T1 G = -G Hx o A identity failed");
    return std::string();
  });

  check("continuity-sigma", [&] {
    CircleGrid gs(128);
    Eigen::MatrixXcd w(gs.size(), 1);
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(gs.size(), 1);
    for (int j = 0; j < gs.size(); ++j) w(j, 0) = 0.5 * gs.node(j);
    AnalyticDisc disc(CircleFunction::complex_vector(gs, w),
                      CircleFunction::real_vector(gs, zero),
                      CircleFunction::real_vector(gs, zero), 0.0);
    auto f = [](const Eigen::VectorXcd& z) { return z(0) * z(0); };
    auto chain = continuity_extend(f, disc, [](const Eigen::VectorXcd&) { return 0.6; });
    if (std::abs(chain.sigma - 0.6 * 0.5 / (2 * 0.5)) > 1e-12)
      return std::string("sigma formula violated");
    Eigen::VectorXcd probe = disc.eval(cd(0.2, 0.1));
    auto val = chain.eval(probe);
    if (!val || std::abs(*val - f(probe)) > 1e-10)
      return std::string("entire extension mismatch");
    return std::string();
  });

  check("gaussian-moments", [&] {
    Eigen::VectorXd lo(1), hi(1);
    lo << -1.5;
    hi << 1.5;
    auto L = real_plane_patch(lo, hi);
    Eigen::VectorXcd zhat = Eigen::VectorXcd::Zero(1);
    double tau = 10.0;
    auto sq = [](const Eigen::VectorXcd& z) { return z(0) * z(0); };
    if (std::abs(gauss_approx(sq, L, zhat, tau) - cd(1.0 / (2 * tau), 0)) > 1e-8)
      return std::string("second moment failed");
    auto one = [](const Eigen::VectorXcd&) { return cd(1, 0); };
    if (std::abs(gauss_approx(one, L, zhat, tau) - cd(1, 0)) > 1e-8)
      return std::string("normalization failed");
    return std::string();
  });

  check("conic-hull-feasibility", [&] {
    Eigen::MatrixXd dirs(2, 3);
    dirs << 1, 0, 1, 0, 1, 1;
    if (!in_conic_hull(dirs, Eigen::Vector2d(1.0, 2.0))) return std::string("feasible missed");
    if (in_conic_hull(dirs, Eigen::Vector2d(-1.0, 0.0))) return std::string("infeasible accepted");
    return std::string();
  });

  check("determinism", [&] {
    auto once = [&] {
      auto disc = solve_bishop(Mq, section2_w(g, 1, 0.02), Eigen::VectorXd::Zero(1));
      return disc_to_json(disc).dump();
    };
    if (once() != once()) return std::string("repeated runs differ");
    return std::string();
  });

  for (const auto& path : scenario_paths) {
    check("scenario " + path, [&]() -> std::string {
      ScenarioFile sf = load_scenario(path);
      RemovabilityReport rep = removability_experiment(sf.scenario);
      if (sf.scenario.expect_removable) {
        if (!rep.nonextendible_discs.empty())
          return "expected removable but found non-extendible discs";
        if (rep.max_extension_error > 1e-6)
          return "extension error " + std::to_string(rep.max_extension_error);
      } else {
        if (rep.nonextendible_discs.empty())
          return "expected the 1/g obstruction but every disc extended";
      }
      return std::string();
    });
  }

  return result;
}

}  // namespace disckit
