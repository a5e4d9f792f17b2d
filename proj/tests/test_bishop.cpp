#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "disckit/bishop.hpp"
#include "test_geometry.hpp"

using namespace disckit;
using namespace disckit::testgeo;
using std::numbers::pi;

namespace {

int numeric_rank(const Eigen::MatrixXd& m, double rel = 1e-6) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  double thr = rel * svd.singularValues()(0);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++r;
  return r;
}

}  // namespace

TEST_CASE("flat manifold: x and y vanish for any w") {
  auto M = flat(2, 2);
  CircleGrid g(128);
  Eigen::MatrixXcd w(g.size(), 2);
  for (int j = 0; j < g.size(); ++j) {
    cd z = g.node(j);
    w(j, 0) = 0.3 * (1.0 - z);
    w(j, 1) = 0.1 * (z * z - 1.0);
  }
  auto disc = solve_bishop(M, CircleFunction::complex_vector(g, w), Eigen::VectorXd::Zero(2));
  CHECK(disc.x_component().sup_norm() == 0.0);
  CHECK(disc.y_component().sup_norm() == 0.0);
  CHECK(disc.residual() == 0.0);
}

TEST_CASE("quadric closed form 2 i c^2 (1 - zeta)") {
  auto M = quadric(1);
  CircleGrid g(512);
  for (double c : {0.01, 0.03, 0.05}) {
    auto disc = solve_bishop(M, section2_w(g, 1, c), Eigen::VectorXd::Zero(1));
    double err = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      cd expect = cd(0, 2.0 * c * c) * (1.0 - g.node(j));
      cd zj = disc.x_component().scalar(j) + cd(0, 1) * disc.y_component().scalar(j);
      err = std::max(err, std::abs(zj - expect));
    }
    CHECK(err < 1e-10);
    CHECK(disc.attachment_residual(M) < 1e-9);
    CHECK(disc.residual() < 1e-11);
    // normalization at node 0 is exact
    CHECK(disc.boundary_point(0).norm() == 0.0);
  }
}

TEST_CASE("quadric with base offset: h independent of x shifts the solution") {
  auto M = quadric(1);
  CircleGrid g(256);
  double c = 0.04;
  Eigen::VectorXd x0(1);
  x0 << 0.1;
  auto disc = solve_bishop(M, section2_w(g, 1, c), x0);
  double err = 0.0;
  for (int j = 0; j < g.size(); ++j)
    err = std::max(err, std::abs(disc.x_component().scalar(j).real() -
                                 (2.0 * c * c * std::sin(g.theta(j)) + 0.1)));
  CHECK(err < 1e-12);
  CHECK(disc.x_component().scalar(0).real() == 0.1);  // x(1) = x0 exactly
}

TEST_CASE("scaling law: solved x scales as c^2") {
  auto M = quadric(1);
  CircleGrid g(256);
  std::vector<double> cs, norms;
  for (double c = 1e-3; c <= 5e-2; c *= 2.0) {
    auto disc = solve_bishop(M, section2_w(g, 1, c), Eigen::VectorXd::Zero(1));
    cs.push_back(std::log(c));
    norms.push_back(std::log(disc.x_component().sup_norm()));
  }
  // least-squares slope of log|x| vs log c
  double n = cs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < cs.size(); ++i) {
    sx += cs[i];
    sy += norms[i];
    sxx += cs[i] * cs[i];
    sxy += cs[i] * norms[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.005));
}

TEST_CASE("uniqueness: different initial guesses reach the same solution") {
  auto M = curved(1, 1);
  CircleGrid g(256);
  double c = 0.05;
  auto d1 = solve_bishop(M, section2_w(g, 1, c), Eigen::VectorXd::Zero(1));
  BishopOptions opts;
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dist(-0.2, 0.2);
  Eigen::MatrixXd guess(g.size(), 1);
  for (int j = 0; j < g.size(); ++j) guess(j, 0) = dist(rng);
  opts.initial_guess = guess;
  auto d2 = solve_bishop(M, section2_w(g, 1, c), Eigen::VectorXd::Zero(1), opts);
  CHECK((d1.x_component().samples() - d2.x_component().samples()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("derivative estimate: |dz_c/dtheta| <= K c uniformly") {
  auto M = quadric(1);
  CircleGrid g(256);
  double worst_ratio = 0.0;
  for (double c : {0.005, 0.01, 0.02, 0.04}) {
    auto disc = solve_bishop(M, section2_w(g, 1, c), Eigen::VectorXd::Zero(1));
    auto dz = theta_derivative(disc.z_boundary());
    worst_ratio = std::max(worst_ratio, dz.sup_norm() / c);
  }
  CHECK(worst_ratio < 1.0);  // on the quadric |dz/dtheta| = 2c^2 sqrt(2-2cos) <= 4c^2
}

TEST_CASE("non-holomorphic w rejected; trust region guards large discs") {
  auto M = quadric(1);
  CircleGrid g(64);
  Eigen::MatrixXcd wbar(g.size(), 1);
  for (int j = 0; j < g.size(); ++j) wbar(j, 0) = std::conj(g.node(j)) - 1.0;
  CHECK_THROWS_AS(solve_bishop(M, CircleFunction::complex_vector(g, wbar),
                               Eigen::VectorXd::Zero(1)),
                  Error);

  BishopOptions tight;
  tight.trust_radius = 1e-4;
  CHECK_THROWS_WITH_AS(solve_bishop(M, section2_w(g, 1, 0.3), Eigen::VectorXd::Zero(1), tight),
                       doctest::Contains("trust region"), Error);
}

TEST_CASE("section-2 disc crossings: flat case {0, pi}") {
  auto M = flat(1, 1);
  auto M1 = hyperplane_v1(M);
  auto result = build_section2_disc(M, M1, 0.05);
  REQUIRE(result.crossings.size() == 2);
  CHECK(result.crossings[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(result.crossings[1] == doctest::Approx(pi).epsilon(1e-10));
}

TEST_CASE("section-2 disc crossings: curved M1 moves theta_c by O(c)") {
  auto M = quadric(1);
  auto M1 = curved_m1(M);  // v1 = u1^2
  double c = 0.02;
  auto result = build_section2_disc(M, M1, c);
  REQUIRE(result.crossings.size() == 2);
  double theta_c = result.crossings[1];

  // oracle: root of -c sin t - c^2 (1 - cos t)^2 near pi by bisection
  auto f = [&](double t) { return -c * std::sin(t) - c * c * std::pow(1.0 - std::cos(t), 2); };
  double lo = pi - 0.5, hi = pi + 0.5;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(lo) * f(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  double oracle = 0.5 * (lo + hi);
  CHECK(theta_c == doctest::Approx(oracle).epsilon(1e-7));
  CHECK(std::abs(theta_c - pi) > c);          // genuinely displaced
  CHECK(std::abs(theta_c - pi) < 10.0 * c);   // but only O(c)
}

TEST_CASE("section-2 disc: oversized c fails as geometry error") {
  auto M = quadric(1);
  auto M1 = hyperplane_v1(M);
  try {
    build_section2_disc(M, M1, 3.0);
    FAIL("expected geometry error");
  } catch (const Error& e) {
    CHECK(e.error_class() == ErrorClass::Domain);
  }
}

TEST_CASE("find_good_disc: clean N needs no perturbation") {
  auto M = quadric(2);
  auto M1 = hyperplane_v1(M);
  // N = {v1 = 0, u2 - u1^2 = 0}: second equation is 4c^2 at the second crossing
  int nv = 2 * M.p() + M.q();
  Submanifold N(M, {Polynomial::variable(nv, M.p()),
                    Polynomial::variable(nv, 1) - mono(M.p(), M.q(), 1.0, {{0, 2}})});
  auto res = find_good_disc(M, N, M1, 0.05, 0.005);
  CHECK(res.perturbation.cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.n_clearance > 1e-4);
  CHECK(res.v0_tc_margin > 1e-6);
  CHECK(res.v0_tn_margin > 1e-6);
}

TEST_CASE("find_good_disc: N through the second crossing forces a perturbation") {
  auto M = quadric(2);
  auto M1 = hyperplane_v1(M);
  auto N = codim2_v1v2(M);  // contains A_c(-1)
  auto res = find_good_disc(M, N, M1, 0.05, 0.01);
  CHECK(res.perturbation.cwiseAbs().maxCoeff() > 0.0);
  CHECK(res.n_clearance > 1e-6);
  CHECK(res.disc.boundary_point(0).norm() < 1e-14);  // base point pinned
  CHECK(res.disc.attachment_residual(M) < 1e-9);

  // linear-algebra oracle on the returned v0: residual against both subspaces
  Eigen::VectorXd v0 = ambient_real(res.v0, M.p(), M.q());
  Eigen::MatrixXd tc = M.complex_tangent_basis(M.base_point());
  CHECK(subspace_distance(v0, tc) > 1e-6);
  Eigen::MatrixXd tn = submanifold_tangent_basis(N, M, M.base_point());
  CHECK(subspace_distance(v0, tn) > 1e-6);
}

TEST_CASE("find_good_disc: tangency precondition enforced") {
  auto Mf = flat(2, 2);
  auto M1 = hyperplane_v1(Mf);
  auto N = codim2_x1x2(Mf);  // T0 N contains T^c
  CHECK_THROWS_AS(find_good_disc(Mf, N, M1, 0.05, 0.01), Error);
}

TEST_CASE("disc_jacobian ranks: flat 2p, quadric 2p+q") {
  CircleGrid g(128);
  BishopOptions opts;
  int harmonics = 2;

  auto Mf = flat(1, 1);
  auto famf = w_harmonic_family(Mf, section2_w(g, 1, 0.05), Eigen::VectorXd::Zero(1), harmonics);
  auto jf = disc_jacobian(famf, evaluation_observable(g.size() / 4));
  CHECK(numeric_rank(jf) == 2 * Mf.p());

  auto Mq = quadric(1);
  auto famq = w_harmonic_family(Mq, section2_w(g, 1, 0.05), Eigen::VectorXd::Zero(1), harmonics);
  auto jq = disc_jacobian(famq, evaluation_observable(g.size() / 4));
  CHECK(numeric_rank(jq) == 2 * Mq.p() + Mq.q());

  DiscFamily empty;
  CHECK(disc_jacobian(empty, evaluation_observable(0)).size() == 0);
}
