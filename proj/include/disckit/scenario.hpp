#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "disckit/extend.hpp"

namespace disckit {

using json = nlohmann::json;

/// Strict parsing helper: rejects keys outside the allowed set.
void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& context);

Polynomial polynomial_from_json(const json& j, int nvars);
json polynomial_to_json(const Polynomial& p);

ComplexPolynomial complex_polynomial_from_json(const json& j, int nvars);
json complex_polynomial_to_json(const ComplexPolynomial& p);

GenericManifold manifold_from_json(const json& j);
json manifold_to_json(const GenericManifold& m);

Submanifold submanifold_from_json(const json& j, const GenericManifold& m);
KGraph kgraph_from_json(const json& j, int p, int q);

/// Closed-form evaluators: {"type": "rational", "numerator": .., "denominator": ..}
/// or {"type": "exp", "linear": [[re, im], ...]} for exp(sum a_l z_l).
Evaluator evaluator_from_json(const json& j, int nvars);

struct ScenarioFile {
  std::string name;
  Scenario scenario;
  int grid = 512;
};

ScenarioFile scenario_from_json(const json& j);
ScenarioFile load_scenario(const std::string& path);

json disc_to_json(const AnalyticDisc& disc);
json defect_report_to_json(const DefectReport& rep);
json normal_derivative_to_json(const NormalDerivativeResult& res);
json removability_report_to_json(const RemovabilityReport& rep);
json isotopy_path_to_json(const IsotopyPath& path);
std::string wedge_sample_csv(const WedgeSample& sample);

/// 64-bit FNV-1a of a string, hex-encoded; used for the output manifests.
std::string fnv1a_hex(const std::string& data);

/// Reproducibility manifest attached to every CLI output.
json make_manifest(const json& config, int grid, double tol, unsigned seed);

}  // namespace disckit
