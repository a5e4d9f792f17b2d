#pragma once

// Shared test geometry: the graphs and submanifolds the suites exercise.

#include <vector>

#include "disckit/manifold.hpp"

namespace disckit::testgeo {

// monomial helper over chart variables (u_1..u_p, v_1..v_p, x_1..x_q)
inline Polynomial mono(int p, int q, double coef, std::initializer_list<std::pair<int, int>> vars) {
  std::vector<int> e(2 * p + q, 0);
  for (auto [idx, pow] : vars) e[idx] += pow;
  return Polynomial::monomial(2 * p + q, coef, e);
}

inline Polynomial abs_w_sq(int p, int q, int k) {
  return mono(p, q, 1.0, {{k, 2}}) + mono(p, q, 1.0, {{p + k, 2}});
}

/// Flat manifold C^p x R^q: h = 0.
inline GenericManifold flat(int p, int q) {
  std::vector<Polynomial> h(q, Polynomial::zero(2 * p + q));
  return GenericManifold(p, q, h);
}

/// Strictly pseudoconvex quadric hypersurface-type graph:
/// y_1 = |w_1|^2 + ... + |w_p|^2, further components |w_1|^2 scaled.
inline GenericManifold quadric(int p, int q = 1) {
  std::vector<Polynomial> h;
  Polynomial levi = Polynomial::zero(2 * p + q);
  for (int k = 0; k < p; ++k) levi = levi + abs_w_sq(p, q, k);
  h.push_back(levi);
  for (int j = 1; j < q; ++j)
    h.push_back(mono(p, q, 1.0, {{0, 1}, {p, 1}}) * static_cast<double>(j));  // u1 v1 terms
  return GenericManifold(p, q, h);
}

/// y_1 = x_1 |w_1|^2: H_x is nonzero along discs, exercising the G-matrix.
inline GenericManifold x_coupled(int p = 1, int q = 1) {
  Polynomial h = abs_w_sq(p, q, 0) * mono(p, q, 1.0, {{2 * p, 1}});
  std::vector<Polynomial> hs{h};
  for (int j = 1; j < q; ++j) hs.push_back(Polynomial::zero(2 * p + q));
  return GenericManifold(p, q, hs);
}

/// x-dependent graph  y = |w_1|^2 (1 + x_1); makes r_z vary along discs.
inline GenericManifold curved(int p = 1, int q = 1) {
  Polynomial h = abs_w_sq(p, q, 0) + abs_w_sq(p, q, 0) * mono(p, q, 1.0, {{2 * p, 1}});
  std::vector<Polynomial> hs{h};
  for (int j = 1; j < q; ++j) hs.push_back(Polynomial::zero(2 * p + q));
  return GenericManifold(p, q, hs);
}

/// M1 = {v_1 = 0} inside M.
inline Submanifold hyperplane_v1(const GenericManifold& M) {
  return Submanifold(M, {Polynomial::variable(2 * M.p() + M.q(), M.p())});
}

/// M1 = {v_1 = u_1^2}: tangent to {v_1 = 0} with curvature in u_1.
inline Submanifold curved_m1(const GenericManifold& M) {
  int p = M.p(), q = M.q();
  return Submanifold(M, {Polynomial::variable(2 * p + q, p) - mono(p, q, 1.0, {{0, 2}})});
}

/// N = {v_1 = v_2 = 0} (codimension 2, requires p >= 2).
inline Submanifold codim2_v1v2(const GenericManifold& M) {
  int nv = 2 * M.p() + M.q();
  return Submanifold(M, {Polynomial::variable(nv, M.p()), Polynomial::variable(nv, M.p() + 1)});
}

/// N = {x_1 = x_2 = 0} (codimension 2 inside flat M, requires q >= 2).
inline Submanifold codim2_x1x2(const GenericManifold& M) {
  int nv = 2 * M.p() + M.q();
  return Submanifold(M, {Polynomial::variable(nv, 2 * M.p()), Polynomial::variable(nv, 2 * M.p() + 1)});
}

/// N = {u_1 = v_1 = 0}: the trace of {w_1 = 0} on M.
inline Submanifold codim2_w1(const GenericManifold& M) {
  int nv = 2 * M.p() + M.q();
  return Submanifold(M, {Polynomial::variable(nv, 0), Polynomial::variable(nv, M.p())});
}

}  // namespace disckit::testgeo
