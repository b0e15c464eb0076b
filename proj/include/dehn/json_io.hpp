#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dehn/coloring.hpp"
#include "dehn/errors.hpp"
#include "dehn/invariant.hpp"
#include "dehn/lb_algebra.hpp"
#include "dehn/palette.hpp"

namespace dehn {

/// Insertion-ordered so that output is stable and matches the documented layout.
using Json = nlohmann::ordered_json;

inline Json to_json(const DehnColoring& c) { return Json(c.colors); }

inline Json to_json(const ColorPalette& s) { return Json(s.elements); }

/// {"free":[{"gen":[a,b,c],"coeff":k}],"torsion":[{"gen":[a,a,b]}]}
inline Json to_json(const NormalChain2& chain) {
  Json out;
  out["free"] = Json::array();
  for (const auto& [g, k] : chain.free)
    out["free"].push_back(Json{{"gen", {g[0], g[1], g[2]}}, {"coeff", k}});
  out["torsion"] = Json::array();
  for (const auto& t : chain.torsion)
    out["torsion"].push_back(Json{{"gen", {t[0], t[0], t[1]}}});
  return out;
}

namespace detail {

inline residue json_residue(const Json& v, residue p, const char* what) {
  if (!v.is_number_integer())
    throw InputError(std::string(what) + ": expected an integer");
  return mod(v.get<std::int64_t>(), p);
}

inline std::array<residue, 3> json_triple(const Json& entry, residue p) {
  if (!entry.is_object() || !entry.contains("gen") || !entry["gen"].is_array() || entry["gen"].size() != 3)
    throw InputError("chain term needs \"gen\": [a,b,c]");
  const auto& g = entry["gen"];
  return {json_residue(g[0], p, "gen"), json_residue(g[1], p, "gen"), json_residue(g[2], p, "gen")};
}

} // namespace detail

/// Reads a chain and rewrites every term into normal form, so non-canonical
/// generators are accepted.
inline NormalChain2 chain_from_json(const Json& j, residue p) {
  require_odd_prime(p);
  if (!j.is_object())
    throw InputError("chain must be a JSON object");
  NormalChain2 out;
  if (j.contains("free")) {
    if (!j["free"].is_array())
      throw InputError("\"free\" must be an array");
    for (const auto& entry : j["free"]) {
      auto g = detail::json_triple(entry, p);
      std::int64_t k = 1;
      if (entry.contains("coeff")) {
        if (!entry["coeff"].is_number_integer())
          throw InputError("\"coeff\" must be an integer");
        k = entry["coeff"].get<std::int64_t>();
      }
      out += normalize_gen2({g[0], g[1], g[2]}, k, p);
    }
  }
  if (j.contains("torsion")) {
    if (!j["torsion"].is_array())
      throw InputError("\"torsion\" must be an array");
    for (const auto& entry : j["torsion"]) {
      auto g = detail::json_triple(entry, p);
      if (g[0] != g[1] || g[0] == g[2])
        throw InputError("torsion generator must have the form [a,a,b] with a != b");
      out += normalize_gen2({g[0], g[1], g[2]}, 1, p);
    }
  }
  return out;
}

/// {"p":7,"flavor":"NT","counts":{"1":49,...}}
inline Json to_json(const PhiMultiset& phi) {
  Json counts = Json::object();
  for (const auto& [v, k] : phi.counts)
    counts[std::to_string(v)] = k;
  return Json{{"p", phi.p}, {"flavor", to_string(phi.flavor)}, {"counts", counts}};
}

inline PhiMultiset phi_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("flavor") || !j.contains("counts"))
    throw InputError("Phi JSON needs p, flavor and counts");
  PhiMultiset phi;
  phi.p = j["p"].get<residue>();
  require_odd_prime(phi.p);
  const auto flavor = j["flavor"].get<std::string>();
  if (flavor == "NT")
    phi.flavor = PhiFlavor::nontrivial;
  else if (flavor == "all")
    phi.flavor = PhiFlavor::all;
  else
    throw InputError("unknown flavor \"" + flavor + "\"");
  for (const auto& [key, value] : j["counts"].items()) {
    std::size_t used = 0;
    residue v = 0;
    try {
      v = std::stoll(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || v < 0 || v >= phi.p)
      throw InputError("Phi count key \"" + key + "\" is not a residue mod p");
    phi.counts[v] = value.get<std::uint64_t>();
  }
  return phi;
}

inline Json to_json(const BoundReport& r) {
  Json out{{"p", r.p}, {"colorable", r.colorable}, {"lower", r.lower}, {"justification", to_string(r.tag)}};
  out["upper"] = r.upper ? Json(*r.upper) : Json(nullptr);
  out["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  out["note"] = r.note;
  return out;
}

inline Json to_json(const WeightSum& w) {
  Json terms = Json::array();
  for (const auto& t : w.terms)
    terms.push_back(Json{{"crossing", t.crossing}, {"sign", t.sign}, {"gen", {t.generator.a, t.generator.b, t.generator.c}}});
  return Json{{"terms", terms}, {"chain", to_json(w.chain)}};
}

inline Json to_json(const KernelAnalysis& ka) {
  Json gens = Json::array();
  for (const auto& g : ka.generators)
    gens.push_back({g[0], g[1], g[2]});
  Json torsion = Json::array();
  for (const auto& t : ka.torsion)
    torsion.push_back({t[0], t[0], t[1]});
  Json rows = Json::array();
  for (const auto& r : ka.row_labels)
    rows.push_back({r[0], r[1]});
  return Json{{"p", ka.palette.p},
              {"palette", to_json(ka.palette)},
              {"generators", gens},
              {"torsion", torsion},
              {"rows", rows},
              {"matrix", ka.matrix},
              {"kernel_basis", ka.kernel_basis},
              {"theta_values", ka.theta_values},
              {"verdict", to_string(ka.verdict)},
              {"relations", ka.relations}};
}

inline Json to_json(const PaletteSurvey& s) {
  Json list = Json::array();
  for (const auto& a : s.analyses)
    list.push_back(to_json(a));
  return Json{{"p", s.p},
              {"palettes", list},
              {"all_theta_trivial", s.all_theta_trivial},
              {"scope", s.scope},
              {"summary", s.all_theta_trivial ? "all theta-trivial" : "some palettes not theta-trivial; review"}};
}

inline Json to_json(const VerificationReport& r) {
  return Json{{"suite", r.suite},
              {"p", r.p},
              {"passed", r.passed},
              {"checks", r.checks},
              {"counterexample", r.counterexample ? Json(*r.counterexample) : Json(nullptr)}};
}

} // namespace dehn
