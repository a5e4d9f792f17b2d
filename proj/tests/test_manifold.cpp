#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "disckit/manifold.hpp"
#include "test_geometry.hpp"

using namespace disckit;
using namespace disckit::testgeo;

namespace {

// Independent inclusion oracle: T^c subset of T_zN iff stacking the N-basis
// with the T^c basis does not increase rank.
bool inclusion_oracle(const GenericManifold& M, const Submanifold& N, const Eigen::VectorXcd& z) {
  const int chart = 2 * M.p() + M.q();
  Eigen::MatrixXd tm = M.tangent_basis(z);          // 2n x chart
  Eigen::MatrixXd grads = N.gradients(z);           // codim x chart

  // T_zN basis: chart directions killed by the equation gradients, lifted to ambient
  Eigen::JacobiSVD<Eigen::MatrixXd> gsvd(grads, Eigen::ComputeFullV);
  int grank = 0;
  double gthr = 1e-10 * std::max(1.0, gsvd.singularValues()(0));
  for (int i = 0; i < gsvd.singularValues().size(); ++i)
    if (gsvd.singularValues()(i) > gthr) ++grank;
  Eigen::MatrixXd chart_null = gsvd.matrixV().rightCols(chart - grank);
  Eigen::MatrixXd tn = tm * chart_null;             // 2n x dim T_zN

  Eigen::MatrixXd tc = M.complex_tangent_basis(z);  // 2n x 2p

  auto rank_of = [](const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double thr = 1e-8 * std::max(1.0, svd.singularValues()(0));
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > thr) ++r;
    return r;
  };

  Eigen::MatrixXd stacked(tn.rows(), tn.cols() + tc.cols());
  stacked << tn, tc;
  return rank_of(stacked) == rank_of(tn);
}

}  // namespace

TEST_CASE("eval_r examples") {
  // flat manifold: points with y = 0 lie on M
  auto Mf = flat(2, 1);
  Eigen::VectorXcd z(3);
  z << cd(0.5, -0.25), cd(0.0, 1.0), cd(0.7, 0.0);
  CHECK(Mf.eval_r(z).norm() == 0.0);

  // quadric h = |w1|^2 in C^2: (1, i) lies on M, (1, 0) gives -1
  auto Mq = quadric(1);
  Eigen::VectorXcd on(2), off(2);
  on << cd(1, 0), cd(0, 1);
  off << cd(1, 0), cd(0, 0);
  CHECK(Mq.eval_r(on).norm() < 1e-15);
  CHECK(Mq.eval_r(off)(0) == doctest::Approx(-1.0));
}

TEST_CASE("manifold invariants rejected") {
  int p = 1, q = 1;
  // h with nonzero constant term
  CHECK_THROWS_AS(GenericManifold(p, q, {Polynomial::constant(3, 1.0)}), Error);
  // h with nonzero linear part
  CHECK_THROWS_AS(GenericManifold(p, q, {Polynomial::variable(3, 0)}), Error);
  // p = 0 impossible
  CHECK_THROWS_AS(GenericManifold(0, 1, {}), Error);
}

TEST_CASE("property: sampled graph points satisfy eval_r = 0") {
  auto M = curved(1, 1);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd uvx(3);
    uvx << dist(rng), dist(rng), dist(rng);
    CHECK(M.eval_r(M.point_on_m(uvx)).norm() < 1e-14);
  }
}

TEST_CASE("r_z convention reproduces the differential (finite differences)") {
  auto M = curved(2, 2);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-0.3, 0.3);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd z(4), dir(4);
    for (int k = 0; k < 4; ++k) {
      z(k) = cd(dist(rng), dist(rng));
      dir(k) = cd(dist(rng), dist(rng));
    }
    Eigen::VectorXd fd = (M.eval_r(z + h * dir) - M.eval_r(z - h * dir)) / (2 * h);
    Eigen::VectorXcd an = M.r_z(z) * dir;
    CHECK((fd - 2.0 * an.real()).norm() < 1e-8);
  }
}

TEST_CASE("build_defining_data") {
  // flat case
  auto dd = build_defining_data(flat(1, 1));
  CHECK((dd.rz0 * dd.D - Eigen::MatrixXcd::Identity(1, 1)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(dd.D(1, 0) - cd(0, 2)) < 1e-14);  // D = (0, 2i)^T

  // quadric in C^2: SVD oracle for the right inverse
  auto M = quadric(1);
  auto dq = build_defining_data(M);
  CHECK((dq.rz0 * dq.D - Eigen::MatrixXcd::Identity(1, 1)).cwiseAbs().maxCoeff() < 1e-12);

  // reproducibility, bit for bit
  auto dq2 = build_defining_data(M);
  CHECK((dq.D - dq2.D).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tangency_check examples") {
  // Theorem-5.A.1 setup: N = {v1 = v2 = 0} in the quadric with p = 2
  auto M = quadric(2);
  auto N = codim2_v1v2(M);
  auto rep = tangency_check(N, M, M.base_point());
  CHECK_FALSE(rep.contains_complex_tangent);
  REQUIRE(rep.witness.has_value());
  // witness lies along Im w_1 or Im w_2 directions (it must violate v1/v2 = 0)
  Eigen::VectorXd wr = ambient_real(*rep.witness, 2, 1);
  CHECK(std::abs(wr(2)) + std::abs(wr(3)) > 1e-3);

  // N = M itself (equation 0 = 0 is not allowed; use a dummy full-tangent case):
  // {x1 = x2 = 0} in the flat manifold contains T^c = C^p x {0}
  auto Mf = flat(2, 2);
  auto Nf = codim2_x1x2(Mf);
  CHECK(tangency_check(Nf, Mf, Mf.base_point()).contains_complex_tangent);

  // off-manifold point rejected
  Eigen::VectorXcd zoff = Eigen::VectorXcd::Constant(3, cd(0.0, 0.5));
  CHECK_THROWS_AS(tangency_check(N, M, zoff), Error);
}

TEST_CASE("property: tangency_check agrees with a dense rank oracle") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  int agree = 0, total = 0;
  for (int p = 1; p <= 3; ++p) {
    for (int q = 1; q <= 3 && total < 100; ++q) {
      for (int trial = 0; trial < 12 && total < 100; ++trial) {
        auto M = (trial % 2 == 0) ? flat(p, q) : quadric(p, q);
        int nv = 2 * p + q;
        // random linear + quadratic equations through 0
        std::vector<Polynomial> eqs;
        int codim = 1 + (trial % 2);
        if (codim > nv - 1) codim = 1;
        for (int i = 0; i < codim; ++i) {
          Polynomial e = Polynomial::zero(nv);
          for (int v = 0; v < nv; ++v) {
            e = e + Polynomial::variable(nv, v) * coef(rng);
            e = e + mono(p, q, 0.5 * coef(rng), {{v, 2}});
          }
          eqs.push_back(e);
        }
        Submanifold N(M, eqs);
        auto rep = tangency_check(N, M, M.base_point());
        bool oracle = inclusion_oracle(M, N, M.base_point());
        if (rep.contains_complex_tangent == oracle) ++agree;
        ++total;
      }
    }
  }
  CHECK(agree == total);
}
