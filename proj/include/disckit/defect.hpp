#pragma once

#include <vector>

#include <Eigen/Dense>

#include "disckit/disc.hpp"
#include "disckit/manifold.hpp"

namespace disckit {

struct FactorOptions {
  double tol = 1e-10;             // negative-mode target on nu * m
  int max_iter = 300;
  double damping = 1.0;
  double contraction_bound = 0.5; // required bound on ||m - I||_inf
  double min_singular = 1e-6;     // nodewise invertibility floor for nu
};

/// The unique real q x q factor nu with nu(1) = I making nu(zeta) m(zeta)
/// holomorphic-boundary, m(zeta) = r_z(A(zeta)) D.
struct NuFactorization {
  CircleFunction nu;         // real matrix, nu at node 0 is the identity exactly
  CircleFunction m;          // complex matrix r_z(A) D
  double negative_residual;  // sup of negative-mode coefficients of nu * m
  int iterations;
};

NuFactorization factor_nu(const AnalyticDisc& A, const GenericManifold& M,
                          const DefiningData& dd, const FactorOptions& opts = {});

struct DefectOptions {
  int truncation = 0;              // negative modes kept per component; 0 means grid/4
  double rank_threshold = 1e-6;    // relative SVD threshold for the nullity
};

struct DefectReport {
  int defect = 0;
  Eigen::MatrixXd basis_b;             // q x defect, admissible covector directions
  Eigen::VectorXd singular_values;     // of the negative-mode constraint map
  std::vector<int> sample_nodes;       // zeta_0 samples used for the consistency check
  std::vector<int> per_zeta_defects;   // dim V_A(zeta_0) recomputed at each sample
  bool rank_warning = false;           // some singular value within 10x of the threshold
};

/// Defect of the disc: nullity of b -> (truncated negative Fourier modes of
/// b nu r_z(A)), recomputed at the sample nodes for the zeta-independence
/// check. Default samples: 8 equispaced boundary nodes.
DefectReport compute_defect(const AnalyticDisc& A, const GenericManifold& M,
                            const NuFactorization& fac, std::vector<int> sample_nodes = {},
                            const DefectOptions& opts = {});

struct RankVerdict {
  int codim_evaluation = 0;   // codim of im F'_{zeta0} in T_{A(zeta0)} M
  int codim_direction = 0;    // codim of im G' in T_{z0} M
  bool matches_defect = false;
  bool tc_included = false;   // T^c subset of both images
  double tc_residual = 0.0;
  double orthogonality_residual = 0.0;  // worst |<i b nu dr, v>| / norms
};

/// Numerical verification of the evaluation-map rank law: the codimensions of
/// the two family-Jacobian images equal the defect, the complex tangent space
/// is contained in them, and the admissible covectors annihilate the
/// evaluation image. jac_eval columns are ambient real vectors at A(zeta0),
/// jac_dir at the base point; both need at least 2p+q parameters.
RankVerdict verify_rank_theorem(const Eigen::MatrixXd& jac_eval, int node_zeta0,
                                const Eigen::MatrixXd& jac_dir, const AnalyticDisc& A,
                                const GenericManifold& M, const NuFactorization& fac,
                                const DefectReport& report, double svd_threshold = 1e-6);

}  // namespace disckit
