#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "disckit/extend.hpp"
#include "test_geometry.hpp"

using namespace disckit;
using namespace disckit::testgeo;

namespace {

// disc (center1 + R zeta, center2) in C^2 as boundary data on the flat model
AnalyticDisc round_disc(cd center1, cd center2, double radius, int grid = 128) {
  CircleGrid g(grid);
  Eigen::MatrixXcd w(g.size(), 1);
  Eigen::MatrixXd x(g.size(), 1), y(g.size(), 1);
  for (int j = 0; j < g.size(); ++j) {
    w(j, 0) = center1 + radius * g.node(j);
    x(j, 0) = center2.real();
    y(j, 0) = center2.imag();
  }
  return AnalyticDisc(CircleFunction::complex_vector(g, w), CircleFunction::real_vector(g, x),
                      CircleFunction::real_vector(g, y), 0.0);
}

AnalyticDisc quadric_disc(double c, int grid = 256) {
  auto M = quadric(1);
  return solve_bishop(M, section2_w(CircleGrid(grid), 1, c), Eigen::VectorXd::Zero(1));
}

}  // namespace

TEST_CASE("taylor germs: seeding, shifting and evaluation are exact on polynomials") {
  auto f = [](const Eigen::VectorXcd& z) { return z(0) * z(0) * z(1) - 2.0 * z(1) + cd(0, 1); };
  Eigen::VectorXcd c0(2);
  c0 << cd(0.3, 0.1), cd(-0.2, 0.0);
  auto germ = TaylorGerm::from_function(f, c0, 8, 0.5);
  Eigen::VectorXcd probe(2);
  probe << cd(0.5, -0.3), cd(0.1, 0.4);
  CHECK(std::abs(germ.eval(probe) - f(probe)) < 1e-12);

  Eigen::VectorXcd c1(2);
  c1 << cd(-0.1, 0.2), cd(0.3, -0.1);
  auto shifted = germ.shifted(c1);
  CHECK(std::abs(shifted.eval(probe) - f(probe)) < 1e-11);
  CHECK_FALSE(shifted.looks_divergent(0.3));
}

TEST_CASE("bilipschitz constants") {
  // round disc: c = C = radius
  auto disc = round_disc(cd(0.1, 0.2), cd(0.0, 0.0), 0.35);
  auto [lo, hi] = bilipschitz_constants(disc);
  CHECK(lo == doctest::Approx(0.35).epsilon(1e-10));
  CHECK(hi == doctest::Approx(0.35).epsilon(1e-10));

  // quadric disc (c0 (1 - zeta), 2 i c0^2 (1 - zeta)): affine, both constants
  // equal c0 sqrt(1 + 4 c0^2), which is within half a percent of c0
  double c0 = 0.05;
  auto qdisc = quadric_disc(c0);
  auto [ql, qh] = bilipschitz_constants(qdisc);
  double expect = c0 * std::sqrt(1.0 + 4.0 * c0 * c0);
  CHECK(ql == doctest::Approx(expect).epsilon(1e-6));
  CHECK(qh == doctest::Approx(expect).epsilon(1e-6));
  CHECK(ql == doctest::Approx(c0).epsilon(0.01));

  // constant disc is not embedded
  auto flat_disc = round_disc(cd(0, 0), cd(0, 0), 0.0);
  CHECK_THROWS_WITH_AS(bilipschitz_constants(flat_disc), doctest::Contains("embedded"), Error);
}

TEST_CASE("continuity principle: entire functions extend exactly") {
  auto disc = round_disc(cd(0.0, 0.0), cd(0.2, -0.1), 0.5);
  auto f = [](const Eigen::VectorXcd& z) {
    return z(0) * z(0) * z(0) - 0.5 * z(0) * z(1) + 2.0;
  };
  OmegaDistance omega = [](const Eigen::VectorXcd&) { return 1.0; };
  auto chain = continuity_extend(f, disc, omega);
  CHECK(chain.sigma == doctest::Approx(1.0 * 0.5 / (2 * 0.5)).epsilon(1e-9));
  CHECK(chain.max_overlap_disagreement < 1e-10);
  for (double rho : {0.0, 0.3, 0.7}) {
    Eigen::VectorXcd z = disc.eval(cd(rho, 0.1 * rho));
    auto val = chain.eval(z);
    REQUIRE(val.has_value());
    CHECK(std::abs(*val - f(z)) < 1e-10);
  }
}

TEST_CASE("continuity principle: sigma formula and monotonicity in r") {
  auto disc = round_disc(cd(0.0, 0.0), cd(0.0, 0.0), 0.5);
  auto f = [](const Eigen::VectorXcd& z) { return z(0); };
  double prev_sigma = 0.0;
  for (double d : {0.1, 0.2, 0.4}) {
    auto chain = continuity_extend(f, disc, [d](const Eigen::VectorXcd&) { return d; });
    CHECK(chain.sigma == doctest::Approx(d * 0.5 / (2 * 0.5)).epsilon(1e-12));
    CHECK(chain.sigma >= prev_sigma);
    prev_sigma = chain.sigma;
  }
  // r = 0: trivial chain
  auto trivial = continuity_extend(f, disc, [](const Eigen::VectorXcd&) { return 0.0; });
  CHECK(trivial.trivial);
}

TEST_CASE("monodromy detector: polydiscs crossing the polar set of 1/z1") {
  // thick boundary tube around |w - center| = R leaving a small core; in the
  // singular case the pole sits inside the core, outside the tube
  auto singular = round_disc(cd(0.05, 0.0), cd(0, 0), 0.5);
  double d = 0.4;
  auto tube = [&](const AnalyticDisc& disc) {
    Eigen::MatrixXcd pts = disc.boundary_points();
    return [pts, d](const Eigen::VectorXcd& z) {
      double dist = std::numeric_limits<double>::infinity();
      for (int j = 0; j < pts.rows(); ++j)
        dist = std::min(dist, (z - pts.row(j).transpose()).norm());
      return d - dist;
    };
  };
  auto f = [](const Eigen::VectorXcd& z) { return 1.0 / z(0); };
  try {
    continuity_extend(f, singular, tube(singular));
    FAIL("expected the monodromy detector to fire");
  } catch (const Error& e) {
    CHECK(e.code() == "monodromy");
  }

  // pole far outside the image: clean continuation
  auto regular = round_disc(cd(1.8, 0.0), cd(0, 0), 0.5);
  auto chain = continuity_extend(f, regular, tube(regular));
  CHECK(chain.max_overlap_disagreement < 1e-6);
  Eigen::VectorXcd mid = regular.eval(cd(0.0, 0.0));
  auto val = chain.eval(mid);
  REQUIRE(val.has_value());
  CHECK(std::abs(*val - 1.0 / mid(0)) < 1e-6);
}

TEST_CASE("family continuity: Hartogs-style sweep on the quadric") {
  // shrink family of the quadric disc; boundaries sweep a 3-dimensional set,
  // interior hull points are reached only through the induction
  auto M = quadric(1);
  double c = 0.4;
  CircleGrid g(128);
  auto base = solve_bishop(M, section2_w(g, 1, c), Eigen::VectorXd::Zero(1));

  std::vector<AnalyticDisc> family;
  const int steps = 24;
  for (int i = 0; i <= steps; ++i) {
    double s = 0.92 * i / steps;  // the s = 1 disc is a point and carries no chain
    Eigen::MatrixXcd w = (1.0 - s) * section2_w(g, 1, c).samples();
    family.push_back(solve_bishop(M, CircleFunction::complex_vector(g, w),
                                  Eigen::VectorXd::Zero(1)));
  }

  // omega: tube around the boundary sweep plus a ball about the terminal
  // point (Prop 3.3 assumes the terminal closure is well inside omega)
  std::vector<Eigen::VectorXcd> sweep;
  for (const auto& disc : family)
    for (int j = 0; j < g.size(); j += 2) sweep.push_back(disc.boundary_point(j));
  double d = 0.1;
  Eigen::VectorXcd terminal = family.back().base_point();
  OmegaDistance omega = [&sweep, d, terminal](const Eigen::VectorXcd& z) {
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& s : sweep) dist = std::min(dist, (z - s).norm());
    return std::max(d - dist, 0.2 - (z - terminal).norm());
  };

  auto f = [](const Eigen::VectorXcd& z) { return 1.0 / (z(0) - 2.0); };
  auto result = continuity_extend_family(f, family, omega);
  CHECK_FALSE(result.thin_margin);

  // value at an interior point of the original disc, away from the sweep
  Eigen::VectorXcd target = base.eval(cd(0.2, 0.0));
  CHECK(omega(target) < 0.0);  // genuinely outside omega
  auto val = result.first.eval(target);
  REQUIRE(val.has_value());
  CHECK(std::abs(*val - 1.0 / (target(0) - 2.0)) < 1e-8);
}

TEST_CASE("isotopy: shrink-w with no singular set") {
  auto M = quadric(1);
  CircleGrid g(128);
  Eigen::MatrixXcd w = section2_w(g, 1, 0.05).samples();
  auto A = solve_bishop(M, CircleFunction::complex_vector(g, w), Eigen::VectorXd::Zero(1));
  PhiOracle none = [](const Eigen::VectorXcd&) {
    return std::numeric_limits<double>::infinity();
  };
  auto path = isotopy_to_point(A, M, none, IsotopyRecipe::ShrinkW);
  CHECK(path.terminal_diameter < 1e-9);
  CHECK(path.refined_ok);
  for (const auto& disc : path.discs) CHECK(disc.attachment_residual(M) < 1e-9);
}

TEST_CASE("isotopy: transversal codim-2 N, base point off N") {
  auto M = quadric(1);
  auto N = codim2_w1(M);  // {w1 = 0}, T_0 N cap C_w1 = {0}
  CircleGrid g(128);
  Eigen::MatrixXcd w = section2_w(g, 1, 0.05).samples();
  w.array() += cd(0.02, 0.0);  // base point at u1 = 0.02, off N
  auto A = solve_bishop(M, CircleFunction::complex_vector(g, w), Eigen::VectorXd::Zero(1));
  PhiOracle phi = [](const Eigen::VectorXcd& z) { return std::abs(z(0)); };

  auto path = isotopy_to_point(A, M, phi, IsotopyRecipe::ShrinkW);
  CHECK(path.terminal_diameter < 1e-9);
  double min_clear = *std::min_element(path.clearances.begin(), path.clearances.end());
  CHECK(min_clear > 0.013);  // distance from the shrinking boundaries to w1 = 0

  // combined recipe: relocate the base away from N, then shrink
  Eigen::VectorXd from = chart_of(A.base_point(), 1, 1);
  BaseCurve curve = [from](double s) {
    Eigen::VectorXd c = from;
    c(0) += 0.04 * s;  // walk along u1
    return c;
  };
  auto cpath = isotopy_to_point(A, M, phi, IsotopyRecipe::Combined, curve);
  CHECK(cpath.terminal_diameter < 1e-9);
  CHECK(*std::min_element(cpath.clearances.begin(), cpath.clearances.end()) > 0.013);
}

TEST_CASE("isotopy: blocked paths report the blocking parameter") {
  auto M = quadric(1);
  CircleGrid g(128);
  Eigen::MatrixXcd w = section2_w(g, 1, 0.05).samples();
  w.array() += cd(0.02, 0.0);
  auto A = solve_bishop(M, CircleFunction::complex_vector(g, w), Eigen::VectorXd::Zero(1));

  // a small blob on one of the intermediate shrink circles
  cd blob = cd(0.02, 0.0) + cd(0.025, 0.025);
  PhiOracle blocking = [blob](const Eigen::VectorXcd& z) {
    return std::abs(z(0) - blob) - 0.005;
  };
  CHECK_THROWS_WITH_AS(isotopy_to_point(A, M, blocking, IsotopyRecipe::ShrinkW),
                       doctest::Contains("blocked"), Error);

  // a slab just beyond the initial boundary, crossed as the base moves out
  PhiOracle wall = [](const Eigen::VectorXcd& z) {
    return std::abs(z(0).real() - 0.13) - 0.003;
  };
  Eigen::VectorXd from = chart_of(A.base_point(), 1, 1);
  BaseCurve curve = [from](double s) {
    Eigen::VectorXd c = from;
    c(0) += 0.06 * s;
    return c;
  };
  CHECK_THROWS_WITH_AS(isotopy_to_point(A, M, wall, IsotopyRecipe::MoveBase, curve),
                       doctest::Contains("blocked"), Error);
}

namespace {

WedgeSample small_quadric_sample(const GenericManifold& M, const Submanifold* N,
                                 const AnalyticDisc& A, const DeformedGraph& dg) {
  auto K = KGraph::trivial(M.p(), M.q());
  ParamBox box;
  box.t_extent = 1e-3;  // |t| sup(chi) stays inside the kappa identity region
  box.t_count = 3;
  box.tau_extent = 0.3;
  box.tau_count = 3;
  box.a_extent = M.p() > 1 ? 0.01 : 0.0;
  box.a_count = M.p() > 1 ? 3 : 1;
  box.p0_u1_extent = 0.02;
  box.p0_u1_count = 3;
  ZetaArc arc;
  arc.rho_count = 2;
  arc.angle_count = 2;
  return sample_wedge(A, M, &dg, K, N, box, arc);
}

}  // namespace

TEST_CASE("cauchy extension: entire function matches everywhere") {
  auto M = quadric(1);
  auto A = quadric_disc(0.05, 512);
  DeformedGraph dg(M, A);
  auto sample = small_quadric_sample(M, nullptr, A, dg);
  auto f = [](const Eigen::VectorXcd& z) { return z(0) * z(0) + 2.0 * z(1) - cd(0, 0.5); };
  auto res = cauchy_extension(f, sample);
  CHECK(res.nonextendible_count == 0);
  double err = 0.0;
  for (size_t i = 0; i < sample.points.size(); ++i) {
    REQUIRE(res.values[i].has_value());
    err = std::max(err, std::abs(*res.values[i] - f(sample.points[i].z)));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("cauchy extension: the 1/g obstruction is detected") {
  auto M = quadric(1);
  auto N = codim2_w1(M);  // {w1 = 0} = Sigma_g cap M for g = w1
  auto A = quadric_disc(0.05, 512);
  DeformedGraph dg(M, A);
  auto sample = small_quadric_sample(M, &N, A, dg);

  auto f = [](const Eigen::VectorXcd& z) { return 1.0 / z(0); };
  CauchyOptions opts;
  opts.content_threshold = 1e-3;
  auto res = cauchy_extension(f, sample, opts);

  // discs with base point at u1 = 0 lie on N; u1 < 0 puts the pole of
  // 1/(w1 o A) inside the unit disc, so negative modes appear
  CHECK(res.meets_singularity_count > 0);
  CHECK(res.nonextendible_count > 0);
  CHECK(res.extended_count > 0);
  for (const auto& d : res.discs) {
    if (d.status == DiscExtendStatus::NonExtendible)
      CHECK(d.negative_content > 1e-3);
  }
  // extended discs carry the true values of 1/w1
  double err = 0.0;
  for (size_t i = 0; i < sample.points.size(); ++i) {
    if (!res.values[i]) continue;
    err = std::max(err, std::abs(*res.values[i] - 1.0 / sample.points[i].z(0)));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("cauchy extension: pole away from all hulls") {
  auto M = quadric(1);
  auto A = quadric_disc(0.05, 512);
  DeformedGraph dg(M, A);
  auto sample = small_quadric_sample(M, nullptr, A, dg);
  auto f = [](const Eigen::VectorXcd& z) { return 1.0 / (z(0) - 0.3); };
  auto res = cauchy_extension(f, sample);
  CHECK(res.nonextendible_count == 0);
  double err = 0.0;
  for (size_t i = 0; i < sample.points.size(); ++i) {
    REQUIRE(res.values[i].has_value());
    err = std::max(err, std::abs(*res.values[i] - f(sample.points[i].z)));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("gaussian approximation: analytic one-dimensional values") {
  Eigen::VectorXd lo(1), hi(1);
  double xhat = 0.25;
  lo << xhat - 1.5;
  hi << xhat + 1.5;
  auto L = real_plane_patch(lo, hi);
  Eigen::VectorXcd zhat(1);
  zhat << cd(xhat, 0.0);
  double tau = 10.0;

  auto one = [](const Eigen::VectorXcd&) { return cd(1.0, 0.0); };
  CHECK(std::abs(gauss_approx(one, L, zhat, tau) - 1.0) < 1e-8);

  auto idf = [](const Eigen::VectorXcd& z) { return z(0); };
  CHECK(std::abs(gauss_approx(idf, L, zhat, tau) - cd(xhat, 0)) < 1e-8);

  auto sq = [](const Eigen::VectorXcd& z) { return z(0) * z(0); };
  cd expect(xhat * xhat + 1.0 / (2.0 * tau), 0.0);
  CHECK(std::abs(gauss_approx(sq, L, zhat, tau) - expect) < 1e-8);
}

TEST_CASE("gaussian approximation: monotone convergence on a curved patch") {
  double u0 = 0.3;
  MaximallyRealPatch L;
  auto f = [](const Eigen::VectorXcd& z) { return std::exp(z(0)); };

  double prev = std::numeric_limits<double>::infinity();
  for (double tau : {10.0, 40.0, 160.0, 640.0}) {
    // box wide against the kernel width 1/sqrt(tau), narrow enough for the
    // quadrature order
    double half = std::min(1.5, 6.0 / std::sqrt(tau));
    L.lo = (Eigen::VectorXd(1) << u0 - half).finished();
    L.hi = (Eigen::VectorXd(1) << u0 + half).finished();
    L.chart = [](const Eigen::VectorXd& u) {
      Eigen::VectorXcd z(1);
      z << cd(u(0), 0.1 * u(0) * u(0));
      return z;
    };
    L.jacobian = [](const Eigen::VectorXd& u) {
      Eigen::MatrixXcd j(1, 1);
      j << cd(1.0, 0.2 * u(0));
      return j;
    };
    Eigen::VectorXcd zhat = L.chart((Eigen::VectorXd(1) << u0).finished());
    cd truth = std::exp(zhat(0));
    double err = std::abs(gauss_approx(f, L, zhat, tau) - truth);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("gaussian approximation: patch translation respects the C1 bound") {
  Eigen::VectorXd lo(1), hi(1);
  lo << -1.0;
  hi << 1.0;
  auto L = real_plane_patch(lo, hi);
  Eigen::VectorXcd small_off(1), big_off(1);
  small_off << cd(0.0, 0.05);
  big_off << cd(0.0, 0.5);
  CHECK_NOTHROW(translated_patch(L, small_off));
  CHECK_THROWS_AS(translated_patch(L, big_off), Error);
}
