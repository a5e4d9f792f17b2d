#include "disckit/scenario.hpp"

#include <cstdio>
#include <fstream>

#include "disckit/errors.hpp"

namespace disckit {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double require_number(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw_config("bad-config", ctx + ": missing numeric field '" + key + "'");
  return j[key].get<double>();
}

}  // namespace

void check_keys(const json& j, const std::vector<std::string>& allowed,
                const std::string& context) {
  if (!j.is_object()) throw_config("bad-config", context + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw_config("bad-config", context + ": unknown key '" + key + "'");
  }
}

Polynomial polynomial_from_json(const json& j, int nvars) {
  if (!j.is_array()) throw_config("bad-config", "polynomial: expected an array of terms");
  std::vector<Polynomial::Term> terms;
  for (const auto& t : j) {
    check_keys(t, {"c", "e"}, "polynomial term");
    Polynomial::Term term;
    term.coef = require_number(t, "c", "polynomial term");
    if (!t.contains("e") || !t["e"].is_array())
      throw_config("bad-config", "polynomial term: missing exponent array 'e'");
    term.expo = t["e"].get<std::vector<int>>();
    terms.push_back(std::move(term));
  }
  return Polynomial(nvars, std::move(terms));
}

json polynomial_to_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& t : p.terms()) out.push_back({{"c", t.coef}, {"e", t.expo}});
  return out;
}

ComplexPolynomial complex_polynomial_from_json(const json& j, int nvars) {
  if (!j.is_array()) throw_config("bad-config", "polynomial: expected an array of terms");
  std::vector<ComplexPolynomial::Term> terms;
  for (const auto& t : j) {
    check_keys(t, {"re", "im", "e"}, "complex polynomial term");
    double re = require_number(t, "re", "complex polynomial term");
    double im = t.contains("im") ? t["im"].get<double>() : 0.0;
    ComplexPolynomial::Term term;
    term.coef = cd(re, im);
    term.expo = t["e"].get<std::vector<int>>();
    terms.push_back(std::move(term));
  }
  return ComplexPolynomial(nvars, std::move(terms));
}

json complex_polynomial_to_json(const ComplexPolynomial& p) {
  json out = json::array();
  for (const auto& t : p.terms())
    out.push_back({{"re", t.coef.real()}, {"im", t.coef.imag()}, {"e", t.expo}});
  return out;
}

GenericManifold manifold_from_json(const json& j) {
  check_keys(j, {"p", "q", "h", "base_point"}, "manifold");
  int p = static_cast<int>(require_number(j, "p", "manifold"));
  int q = static_cast<int>(require_number(j, "q", "manifold"));
  if (!j.contains("h") || !j["h"].is_array() || j["h"].size() != static_cast<size_t>(q))
    throw_config("bad-config", "manifold: 'h' must list q polynomial components");
  std::vector<Polynomial> h;
  for (const auto& comp : j["h"]) h.push_back(polynomial_from_json(comp, 2 * p + q));
  Eigen::VectorXcd base;
  if (j.contains("base_point")) {
    base.resize(j["base_point"].size());
    int i = 0;
    for (const auto& entry : j["base_point"]) {
      base(i++) = cd(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return GenericManifold(p, q, std::move(h), std::move(base));
}

json manifold_to_json(const GenericManifold& m) {
  json h = json::array();
  for (const auto& comp : m.h()) h.push_back(polynomial_to_json(comp));
  json base = json::array();
  for (int i = 0; i < m.base_point().size(); ++i)
    base.push_back({m.base_point()(i).real(), m.base_point()(i).imag()});
  return json{{"p", m.p()}, {"q", m.q()}, {"h", h}, {"base_point", base}};
}

Submanifold submanifold_from_json(const json& j, const GenericManifold& m) {
  check_keys(j, {"equations"}, "submanifold");
  if (!j.contains("equations") || !j["equations"].is_array())
    throw_config("bad-config", "submanifold: missing 'equations' array");
  std::vector<Polynomial> eqs;
  for (const auto& e : j["equations"])
    eqs.push_back(polynomial_from_json(e, 2 * m.p() + m.q()));
  return Submanifold(m, std::move(eqs));
}

KGraph kgraph_from_json(const json& j, int p, int q) {
  check_keys(j, {"k"}, "k-graph");
  if (!j.contains("k")) return KGraph::trivial(p, q);
  return KGraph(p, q, polynomial_from_json(j["k"], 2 * p - 1 + q));
}

Evaluator evaluator_from_json(const json& j, int nvars) {
  check_keys(j, {"type", "numerator", "denominator", "linear"}, "function");
  std::string type = j.value("type", "rational");
  if (type == "rational") {
    ComplexPolynomial num = j.contains("numerator")
                                ? complex_polynomial_from_json(j["numerator"], nvars)
                                : ComplexPolynomial::constant(nvars, 1.0);
    ComplexPolynomial den = j.contains("denominator")
                                ? complex_polynomial_from_json(j["denominator"], nvars)
                                : ComplexPolynomial::constant(nvars, 1.0);
    return [num, den](const Eigen::VectorXcd& z) { return num(z) / den(z); };
  }
  if (type == "exp") {
    if (!j.contains("linear") || !j["linear"].is_array() ||
        j["linear"].size() != static_cast<size_t>(nvars))
      throw_config("bad-config", "function: 'exp' needs a linear coefficient per variable");
    Eigen::VectorXcd a(nvars);
    int i = 0;
    for (const auto& entry : j["linear"])
      a(i++) = cd(entry.at(0).get<double>(), entry.at(1).get<double>());
    return [a](const Eigen::VectorXcd& z) { return std::exp((a.array() * z.array()).sum()); };
  }
  throw_config("bad-config", "function: unknown type '" + type + "'");
}

ScenarioFile scenario_from_json(const json& j) {
  check_keys(j,
             {"name", "manifold", "n", "m1", "k", "f", "expect_removable", "c", "delta", "box",
              "arc", "content_threshold", "grid"},
             "scenario");
  GenericManifold M = manifold_from_json(j.at("manifold"));
  Submanifold N = submanifold_from_json(j.at("n"), M);
  Submanifold M1 = submanifold_from_json(j.at("m1"), M);
  KGraph K = j.contains("k") ? kgraph_from_json(j.at("k"), M.p(), M.q())
                             : KGraph::trivial(M.p(), M.q());
  Evaluator f = evaluator_from_json(j.at("f"), M.n());
  Scenario sc{std::move(M), std::move(N), std::move(M1), std::move(K), f, f};
  sc.expect_removable = j.value("expect_removable", true);
  sc.c = j.value("c", 0.05);
  sc.delta = j.value("delta", 0.01);
  sc.content_threshold = j.value("content_threshold", 1e-3);
  if (j.contains("box")) {
    const json& b = j["box"];
    check_keys(b,
               {"t_extent", "t_count", "tau_extent", "tau_count", "a_extent", "a_count",
                "p0_u1_extent", "p0_u1_count", "p0_w_extent", "p0_w_count", "p0_x_extent",
                "p0_x_count"},
               "box");
    sc.box.t_extent = b.value("t_extent", 0.0);
    sc.box.t_count = b.value("t_count", 1);
    sc.box.tau_extent = b.value("tau_extent", 0.0);
    sc.box.tau_count = b.value("tau_count", 1);
    sc.box.a_extent = b.value("a_extent", 0.0);
    sc.box.a_count = b.value("a_count", 1);
    sc.box.p0_u1_extent = b.value("p0_u1_extent", 0.0);
    sc.box.p0_u1_count = b.value("p0_u1_count", 1);
    sc.box.p0_w_extent = b.value("p0_w_extent", 0.0);
    sc.box.p0_w_count = b.value("p0_w_count", 1);
    sc.box.p0_x_extent = b.value("p0_x_extent", 0.0);
    sc.box.p0_x_count = b.value("p0_x_count", 1);
  }
  if (j.contains("arc")) {
    const json& a = j["arc"];
    check_keys(a, {"rho_min", "rho_max", "rho_count", "angle", "angle_count"}, "arc");
    sc.arc.rho_min = a.value("rho_min", 0.80);
    sc.arc.rho_max = a.value("rho_max", 0.98);
    sc.arc.rho_count = a.value("rho_count", 3);
    sc.arc.angle = a.value("angle", 0.25);
    sc.arc.angle_count = a.value("angle_count", 3);
  }
  ScenarioFile sf{j.value("name", "scenario"), std::move(sc), j.value("grid", 512)};
  sf.scenario.good.grid = CircleGrid(sf.grid);
  return sf;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_config("bad-config", "cannot open scenario file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw_config("bad-config", "parse error in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

json disc_to_json(const AnalyticDisc& disc) {
  FourierCoefficients coef = fft(disc.boundary());
  json comps = json::array();
  for (int c = 0; c < coef.components(); ++c) {
    json modes = json::array();
    for (int bin = 0; bin < coef.size(); ++bin) {
      cd v = coef.data()(bin, c);
      if (std::abs(v) < 1e-15) continue;
      int k = bin < coef.size() / 2 ? bin : bin - coef.size();
      modes.push_back({{"k", k}, {"re", v.real()}, {"im", v.imag()}});
    }
    comps.push_back(modes);
  }
  json base = json::array();
  Eigen::VectorXcd bp = disc.base_point();
  for (int i = 0; i < bp.size(); ++i) base.push_back({bp(i).real(), bp(i).imag()});
  return json{{"grid", disc.grid().size()},
              {"p", disc.p()},
              {"q", disc.q()},
              {"fourier", comps},
              {"base_point", base},
              {"residual", disc.residual()}};
}

json defect_report_to_json(const DefectReport& rep) {
  json sv = json::array();
  for (int i = 0; i < rep.singular_values.size(); ++i) sv.push_back(rep.singular_values(i));
  json basis = json::array();
  for (int c = 0; c < rep.basis_b.cols(); ++c) {
    json col = json::array();
    for (int r = 0; r < rep.basis_b.rows(); ++r) col.push_back(rep.basis_b(r, c));
    basis.push_back(col);
  }
  return json{{"defect", rep.defect},
              {"singular_values", sv},
              {"basis_b", basis},
              {"sample_nodes", rep.sample_nodes},
              {"per_zeta_defects", rep.per_zeta_defects},
              {"rank_warning", rep.rank_warning}};
}

json normal_derivative_to_json(const NormalDerivativeResult& res) {
  json d0 = json::array(), dp = json::array(), jf = json::array(), sv = json::array();
  for (int i = 0; i < res.d0.size(); ++i) d0.push_back(res.d0(i));
  for (int r = 0; r < res.d_prime.rows(); ++r) {
    json row = json::array(), jrow = json::array();
    for (int c = 0; c < res.d_prime.cols(); ++c) {
      row.push_back(res.d_prime(r, c));
      jrow.push_back(res.j_formula(r, c));
    }
    dp.push_back(row);
    jf.push_back(jrow);
  }
  for (int i = 0; i < res.singular_values.size(); ++i) sv.push_back(res.singular_values(i));
  return json{{"d0", d0},
              {"d_prime", dp},
              {"j_formula", jf},
              {"singular_values", sv},
              {"rank", res.rank},
              {"max_cross_error", res.max_cross_error}};
}

json removability_report_to_json(const RemovabilityReport& rep) {
  json params = json::array();
  for (int i = 0; i < rep.good_disc_params.size(); ++i)
    params.push_back(rep.good_disc_params(i));
  return json{{"good_disc_params", params},
              {"good_disc_clearance", rep.good_disc_clearance},
              {"crossings", rep.crossings},
              {"defect", rep.defect},
              {"wedge_points", rep.wedge_points},
              {"wedge_discs", rep.wedge_discs},
              {"cone_contains_v0", rep.cone_contains_v0},
              {"extended_count", rep.extended_count},
              {"nonextendible_discs", rep.nonextendible_discs},
              {"max_extension_error", rep.max_extension_error},
              {"max_pair_spread", rep.max_pair_spread},
              {"stages_completed", rep.stages_completed}};
}

json isotopy_path_to_json(const IsotopyPath& path) {
  return json{{"s_values", path.s_values},
              {"clearances", path.clearances},
              {"terminal_diameter", path.terminal_diameter},
              {"refined_ok", path.refined_ok},
              {"steps", path.discs.size()}};
}

std::string wedge_sample_csv(const WedgeSample& sample) {
  std::string out;
  if (sample.discs.empty()) return "empty\n";
  const auto& first = sample.discs.front().params;
  int q = static_cast<int>(first.t.size());
  int pm1 = static_cast<int>(first.a.size());
  out += "disc_index";
  for (int i = 0; i < q; ++i) out += ",t" + std::to_string(i + 1);
  out += ",tau";
  for (int i = 0; i < pm1; ++i)
    out += ",a" + std::to_string(i + 2) + "_re,a" + std::to_string(i + 2) + "_im";
  out += ",u1_0";
  for (int i = 0; i < pm1; ++i)
    out += ",w" + std::to_string(i + 2) + "_0_re,w" + std::to_string(i + 2) + "_0_im";
  for (int i = 0; i < q; ++i) out += ",x" + std::to_string(i + 1) + "_0";
  out += ",zeta_re,zeta_im";
  int n = q + pm1 + 1;
  for (int i = 0; i < n; ++i)
    out += ",z" + std::to_string(i + 1) + "_re,z" + std::to_string(i + 1) + "_im";
  out += ",p0_in_n,subbox\n";

  for (const auto& pt : sample.points) {
    const auto& par = sample.discs[pt.disc_index].params;
    out += std::to_string(pt.disc_index);
    for (int i = 0; i < q; ++i) out += "," + fmt17(par.t(i));
    out += "," + fmt17(par.tau);
    for (int i = 0; i < pm1; ++i)
      out += "," + fmt17(par.a(i).real()) + "," + fmt17(par.a(i).imag());
    out += "," + fmt17(par.u1);
    for (int i = 0; i < pm1; ++i)
      out += "," + fmt17(par.w_rest(i).real()) + "," + fmt17(par.w_rest(i).imag());
    for (int i = 0; i < q; ++i) out += "," + fmt17(par.x0(i));
    out += "," + fmt17(pt.zeta.real()) + "," + fmt17(pt.zeta.imag());
    for (int i = 0; i < pt.z.size(); ++i)
      out += "," + fmt17(pt.z(i).real()) + "," + fmt17(pt.z(i).imag());
    out += "," + std::to_string(pt.p0_in_n ? 1 : 0) + "," + std::to_string(pt.subbox) + "\n";
  }
  return out;
}

std::string fnv1a_hex(const std::string& data) {
  unsigned long long h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return buf;
}

json make_manifest(const json& config, int grid, double tol, unsigned seed) {
  return json{{"tool", "disckit 0.1.0"},
              {"config_hash", fnv1a_hex(config.dump())},
              {"grid", grid},
              {"tolerance", tol},
              {"seed", seed}};
}

}  // namespace disckit
