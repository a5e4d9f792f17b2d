#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "disckit/bishop.hpp"
#include "disckit/deform.hpp"
#include "disckit/defect.hpp"
#include "disckit/taylor.hpp"

namespace disckit {

using Evaluator = std::function<cd(const Eigen::VectorXcd&)>;
/// Signed distance to the complement of omega (> 0 inside).
using OmegaDistance = std::function<double(const Eigen::VectorXcd&)>;
/// Distance proxy to a singular set.
using PhiOracle = std::function<double(const Eigen::VectorXcd&)>;

/// Polycircular (max-coordinate) distance, the metric of the polydisc chain.
double polydist(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Euclidean bi-Lipschitz constants of a disc: extremes of
/// |A(zeta) - A(zeta')| / |zeta - zeta'| over sample pairs of the closed disc
/// together with the derivative norm at the coincident limit. Throws
/// "non-embedded" when the lower constant collapses.
std::pair<double, double> bilipschitz_constants(const AnalyticDisc& A);

struct ChainCenter {
  Eigen::VectorXcd z;
  cd zeta;
  bool seeded_from_f = false;  // direct Cauchy germ (center inside omega)
  double germ_radius = 0.0;    // validity radius carried along re-expansions
  TaylorGerm germ;
};

struct PolydiscChain {
  bool trivial = false;  // r = 0 degenerate case of the lemma
  double r = 0.0, lower = 0.0, upper = 0.0, sigma = 0.0;
  std::vector<ChainCenter> centers;
  std::vector<std::pair<int, int>> overlap_edges;
  double max_overlap_disagreement = 0.0;

  /// Value of the extension at a point covered by some center's polydisc.
  std::optional<cd> eval(const Eigen::VectorXcd& z) const;
};

struct ChainOptions {
  int germ_degree = 10;
  int quadrature = 24;
  double overlap_tol = 1e-6;   // germ disagreement threshold (relative)
  int max_centers = 6000;
};

/// Lemma-3.2 style extension of f along the disc: sigma = r c / (2 C),
/// Taylor germs at boundary and interior images, re-expanded across the
/// overlap graph. Disagreement on an overlap (or a divergent transported
/// germ) raises the monodromy error: the multivaluedness detector.
PolydiscChain continuity_extend(const Evaluator& f, const AnalyticDisc& A,
                                const OmegaDistance& omega_dist, const ChainOptions& opts = {});

/// Prop-3.3 style induction over a disc family (s increasing toward the disc
/// contained in omega): each chain seeds the previous one. Returns the chain
/// of the first disc. Flags configurations where the terminal disc has less
/// than 2 sigma of margin inside omega.
struct FamilyChainResult {
  PolydiscChain first;
  bool thin_margin = false;
};
FamilyChainResult continuity_extend_family(const Evaluator& f,
                                           const std::vector<AnalyticDisc>& discs,
                                           const OmegaDistance& omega_dist,
                                           const ChainOptions& opts = {});

enum class IsotopyRecipe { ShrinkW, MoveBase, Combined };

/// s -> chart coordinates (u, v, x) of the moving base point.
using BaseCurve = std::function<Eigen::VectorXd(double)>;

struct IsotopyOptions {
  int steps = 32;
  double clearance_min = 1e-8;
  BishopOptions bishop;
};

struct IsotopyPath {
  std::vector<double> s_values;
  std::vector<AnalyticDisc> discs;
  std::vector<double> clearances;  // min boundary distance to Phi at each s
  double terminal_diameter = 0.0;
  bool refined_ok = false;  // clearances re-validated on the 2x finer grid
};

/// Shrink-w, move-base, or their composition, per the isotopy recipes. The
/// path fails with "isotopy-blocked" when a boundary comes within
/// clearance_min of the singular set.
IsotopyPath isotopy_to_point(const AnalyticDisc& A, const GenericManifold& M,
                             const PhiOracle& phi, IsotopyRecipe recipe,
                             const BaseCurve& curve = {}, const IsotopyOptions& opts = {});

enum class DiscExtendStatus { Extended, MeetsSingularity, NonExtendible };

struct DiscExtension {
  int disc_index = -1;
  DiscExtendStatus status = DiscExtendStatus::Extended;
  double negative_content = 0.0;
};

struct CauchyExtensionResult {
  std::vector<DiscExtension> discs;
  std::vector<std::optional<cd>> values;  // one per wedge point
  int extended_count = 0;
  int nonextendible_count = 0;
  int meets_singularity_count = 0;
  double max_pair_spread = 0.0;      // near-coincident point consistency
  double pair_distance_scale = 0.0;  // radius used for the pair search
};

struct CauchyOptions {
  double content_threshold = 1e-8;  // negative-mode flag level
  double pair_radius_factor = 1e-2; // pair search radius relative to cloud size
  bool throw_on_nonextendible = false;
};

/// Spectral Cauchy extension of f over the sampled wedge: per generating
/// disc, f o A on the boundary must be holomorphic boundary data; value at
/// A(zeta) is the power-series evaluation. Discs with base point on N are
/// excluded (the unattainable set); discs whose composition carries negative
/// modes are flagged non-extendible: the detection of a genuine singularity.
CauchyExtensionResult cauchy_extension(const Evaluator& f, const WedgeSample& sample,
                                       const CauchyOptions& opts = {});

/// Parameterized maximally real n-dimensional patch u -> z(u).
struct MaximallyRealPatch {
  Eigen::VectorXd lo, hi;  // parameter box in R^n
  std::function<Eigen::VectorXcd(const Eigen::VectorXd&)> chart;
  std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)> jacobian;  // dz/du
};

/// Flat patch z = u on [lo, hi].
MaximallyRealPatch real_plane_patch(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

/// Translate a patch by a constant offset; enforces the C^1 closeness bound.
MaximallyRealPatch translated_patch(const MaximallyRealPatch& L, const Eigen::VectorXcd& offset,
                                    double c1_bound = 0.1);

/// Gaussian approximation operator
///   G_tau f(zhat) = (tau/pi)^{n/2} int_L exp(-tau (z - zhat)^2) f(z) dz
/// with (z - zhat)^2 the holomorphic square sum, by tensor Gauss-Legendre
/// quadrature; a Richardson check against a refined rule guards convergence.
cd gauss_approx(const Evaluator& f, const MaximallyRealPatch& L, const Eigen::VectorXcd& zhat,
                double tau, int order = 64, double richardson_tol = 1e-6);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

struct Scenario {
  GenericManifold M;
  Submanifold N;
  Submanifold M1;
  KGraph K;
  Evaluator f;       // closed form on M \ N
  Evaluator truth;   // known extension (closed form)
  bool expect_removable = true;
  double c = 0.05;
  double delta = 0.01;
  ParamBox box;
  ZetaArc arc;
  double content_threshold = 1e-3;
  GoodDiscOptions good;
  WedgeOptions wedge;
};

struct RemovabilityReport {
  Eigen::VectorXd good_disc_params;
  double good_disc_clearance = 0.0;
  std::vector<double> crossings;
  int defect = 0;
  int wedge_points = 0;
  int wedge_discs = 0;
  bool cone_contains_v0 = false;
  int extended_count = 0;
  std::vector<int> nonextendible_discs;
  double max_extension_error = 0.0;  // vs truth, over extended points
  double max_pair_spread = 0.0;
  std::string stages_completed;
};

/// The end-to-end pipeline: good disc -> defect -> deformation family ->
/// wedge sample -> Cauchy extension -> comparison with the known truth.
/// Stage failures are rethrown with the stage label attached.
RemovabilityReport removability_experiment(const Scenario& sc);

}  // namespace disckit
