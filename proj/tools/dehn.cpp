// dehn: Dehn p-colorings, the theta_p cocycle invariant and palette kernels
// from the command line. Output is JSON on stdout (CSV with --csv).

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dehn/coloring.hpp"
#include "dehn/errors.hpp"
#include "dehn/invariant.hpp"
#include "dehn/json_io.hpp"
#include "dehn/knot_table.hpp"
#include "dehn/palette.hpp"
#include "dehn/pd_code.hpp"
#include "dehn/results_store.hpp"
#include "dehn/theta.hpp"
#include "dehn/topology.hpp"

using namespace dehn;

namespace {

enum ExitCode { ok = 0, verification_failed = 1, input_error = 2, budget_exceeded = 3 };

struct Options {
  std::string pd_text;
  std::string knot;
  std::string table;
  residue p = 0;
  bool enumerate = false;
  bool classes = false;
  std::string flavor = "nt";
  std::string set;
  bool all_candidates = false;
  std::string suite = "cocycle";
  std::string store;
  bool csv = false;
  unsigned threads = 0;
};

struct Diagram {
  std::string name; // knot name, or the PD code when given inline
  PDCode pd;
};

Diagram resolve_diagram(const Options& o) {
  if (!o.pd_text.empty() && !o.knot.empty())
    throw InputError("give either --pd or --knot, not both");
  if (!o.pd_text.empty()) {
    PDCode pd = parse_pd_code(o.pd_text);
    return {to_string(pd), pd};
  }
  if (o.knot.empty())
    throw InputError("a diagram is required: --pd <code> or --knot <name>");
  auto table = o.table.empty() ? builtin_knot_table() : load_knot_table(o.table);
  return {o.knot, find_knot(table, o.knot).pd};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s)
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string join(const Json& arr, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out += (i ? sep : "") + arr[i].dump();
  return out;
}

unsigned thread_count(const Options& o) {
  if (o.threads)
    return o.threads;
  return std::max(1U, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------

Json run_colorings(const Options& o, const Diagram& d) {
  DiagramTopology topo = extract_topology(d.pd);
  ColoringSpace space = coloring_space(topo, o.p);
  auto total = coloring_count(space);
  if (!total)
    throw BudgetExceeded("coloring count p^" + std::to_string(space.dimension()) + " overflows 64 bits");
  const std::uint64_t trivial = static_cast<std::uint64_t>(o.p * o.p);
  Json out{{"knot", d.name}, {"pd", to_string(d.pd)}, {"p", o.p},
           {"regions", topo.region_count}, {"dimension", space.dimension()},
           {"total", *total}, {"trivial", trivial}, {"nontrivial", *total - trivial}};
  if (*total == trivial)
    out["note"] = "not Dehn " + std::to_string(o.p) + "-colorable on this diagram";
  if (o.enumerate) {
    Json list = Json::array();
    for_each_coloring(space, [&](const DehnColoring& c) {
      const bool nt = classify_coloring(topo, c) == ColoringClass::nontrivial;
      list.push_back(Json{{"colors", to_json(c)}, {"class", nt ? "nontrivial" : "trivial"},
                          {"palette_size", palette_of(c).size()}});
    });
    out["colorings"] = list;
  }
  if (o.classes) {
    Json list = Json::array();
    for (const auto& cls : coloring_affine_classes(topo, space))
      list.push_back(Json{{"representative", to_json(cls.representative)},
                          {"size", cls.members.size()},
                          {"stabilizer_order", cls.stabilizer_order},
                          {"palette", to_json(palette_of(cls.representative))}});
    out["classes"] = list;
  }
  return out;
}

std::string csv_colorings(const Json& j) {
  std::ostringstream s;
  if (j.contains("colorings")) {
    s << "index,class,palette_size,colors\n";
    std::size_t i = 0;
    for (const auto& c : j["colorings"])
      s << i++ << "," << c["class"].get<std::string>() << "," << c["palette_size"] << "," << join(c["colors"]) << "\n";
    return s.str();
  }
  if (j.contains("classes")) {
    s << "representative,size,stabilizer_order,palette\n";
    for (const auto& c : j["classes"])
      s << join(c["representative"]) << "," << c["size"] << "," << c["stabilizer_order"] << "," << join(c["palette"])
        << "\n";
    return s.str();
  }
  s << "knot,p,dimension,total,trivial,nontrivial\n"
    << csv_field(j["knot"].get<std::string>()) << "," << j["p"] << "," << j["dimension"] << "," << j["total"] << ","
    << j["trivial"] << "," << j["nontrivial"] << "\n";
  return s.str();
}

Json run_invariant(const Options& o, const Diagram& d) {
  PhiFlavor flavor;
  if (o.flavor == "nt" || o.flavor == "NT")
    flavor = PhiFlavor::nontrivial;
  else if (o.flavor == "all")
    flavor = PhiFlavor::all;
  else
    throw InputError("--flavor must be nt or all");
  DiagramTopology topo = extract_topology(d.pd);
  ColoringSpace space = coloring_space(topo, o.p);
  ThetaCocycle theta(o.p);
  const unsigned threads = thread_count(o);
  PhiMultiset nt = phi_invariant(topo, space, theta, PhiFlavor::nontrivial, threads);
  PhiMultiset phi = flavor == PhiFlavor::nontrivial ? nt : phi_invariant(topo, space, theta, flavor, threads);
  BoundReport bounds = mincol_bounds(topo, space, nt);
  return Json{{"knot", d.name},
              {"pd", to_string(d.pd)},
              {"convention", convention_version},
              {"phi", to_json(phi)},
              {"bounds", to_json(bounds)}};
}

std::string csv_invariant(const Json& j) {
  std::ostringstream s;
  s << "value,count\n";
  for (const auto& [v, k] : j["phi"]["counts"].items())
    s << v << "," << k << "\n";
  return s.str();
}

std::vector<residue> parse_set(const std::string& text) {
  std::vector<residue> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = detail::trim(item);
    char* end = nullptr;
    long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0')
      throw InputError("bad palette element \"" + item + "\"");
    out.push_back(v);
  }
  if (out.empty())
    throw InputError("palette must be nonempty");
  return out;
}

Json run_palette(const Options& o) {
  if (o.all_candidates == !o.set.empty())
    throw InputError("give exactly one of --set or --all-candidates");
  if (o.all_candidates)
    return to_json(analyze_all(o.p));
  return to_json(kernel_analysis(parse_set(o.set), o.p));
}

std::string csv_palette(const Json& j) {
  std::ostringstream s;
  s << "palette,generators,kernel_rank,theta_values,verdict,relations\n";
  auto row = [&](const Json& a) {
    s << csv_field(join(a["palette"])) << "," << a["generators"].size() << "," << a["kernel_basis"].size() << ","
      << csv_field(join(a["theta_values"])) << "," << a["verdict"].get<std::string>() << ","
      << csv_field(a["relations"].get<std::string>()) << "\n";
  };
  if (j.contains("palettes"))
    for (const auto& a : j["palettes"])
      row(a);
  else
    row(j);
  return s.str();
}

Json run_verify(const Options& o, const std::optional<Diagram>& d) {
  VerificationReport rep;
  if (o.suite == "cocycle")
    rep = verify_theta_cocycle(o.p);
  else if (o.suite == "chain")
    rep = verify_chain_complex(o.p);
  else if (o.suite == "weights") {
    if (!d)
      throw InputError("--suite weights needs --pd or --knot");
    rep = verify_weights(extract_topology(d->pd), o.p);
  } else
    throw InputError("--suite must be cocycle, chain or weights");
  Json out = to_json(rep);
  if (d)
    out["knot"] = d->name;
  return out;
}

std::string csv_verify(const Json& j) {
  std::ostringstream s;
  s << "suite,p,passed,checks,counterexample\n"
    << j["suite"].get<std::string>() << "," << j["p"] << "," << (j["passed"].get<bool>() ? "true" : "false") << ","
    << j["checks"] << "," << (j["counterexample"].is_null() ? "" : csv_field(j["counterexample"].get<std::string>()))
    << "\n";
  return s.str();
}

// ---------------------------------------------------------------------------

std::string canonical_inputs(const std::string& command, const Options& o, const std::optional<Diagram>& d) {
  std::ostringstream s;
  s << "command=" << command << "\np=" << o.p << "\nconvention=" << convention_version;
  if (d)
    s << "\npd=" << to_string(d->pd);
  if (command == "colorings")
    s << "\nenumerate=" << o.enumerate << "\nclasses=" << o.classes;
  if (command == "invariant")
    s << "\nflavor=" << o.flavor;
  if (command == "palette")
    s << "\nset=" << o.set << "\nall=" << o.all_candidates;
  if (command == "verify")
    s << "\nsuite=" << o.suite;
  return s.str();
}

int emit(const std::string& command, const Options& o, const std::optional<Diagram>& d,
         const std::function<Json()>& compute, const std::function<std::string(const Json&)>& to_csv) {
  Json out;
  if (!o.store.empty()) {
    ResultsStore store(o.store);
    std::string knot = d ? d->name : (o.all_candidates ? "candidates" : "palette:" + o.set);
    StoreKey key{knot, o.p, command + (command == "verify" ? ":" + o.suite : ""), convention_version};
    out = store.get_or_compute(key, sha256_hex(canonical_inputs(command, o, d)), compute);
  } else {
    out = compute();
  }
  if (o.csv)
    std::cout << to_csv(out);
  else
    std::cout << out.dump() << "\n";
  if (out.contains("passed") && !out["passed"].get<bool>())
    return verification_failed;
  return ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dehn p-colorings of knot diagrams and the theta_p cocycle invariant"};
  app.require_subcommand(1);
  Options o;

  auto add_diagram = [&](CLI::App* cmd) {
    cmd->add_option("--pd", o.pd_text, "PD code, e.g. \"X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)\" or JSON");
    cmd->add_option("--knot", o.knot, "knot name from the built-in table or --table");
    cmd->add_option("--table", o.table, "knot table (CSV name,pd or JSON)");
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--p", o.p, "odd prime")->required();
    cmd->add_option("--store", o.store, "JSON-lines results store for caching");
    cmd->add_flag("--csv", o.csv, "CSV instead of JSON");
  };

  auto* colorings = app.add_subcommand("colorings", "count, enumerate and classify Dehn p-colorings");
  add_diagram(colorings);
  add_common(colorings);
  colorings->add_flag("--enumerate", o.enumerate, "list every coloring");
  colorings->add_flag("--classes", o.classes, "affine equivalence classes of nontrivial colorings");

  auto* invariant = app.add_subcommand("invariant", "Phi_theta_p multiset and mincol bounds");
  add_diagram(invariant);
  add_common(invariant);
  invariant->add_option("--flavor", o.flavor, "nt (nontrivial colorings) or all")->capture_default_str();
  invariant->add_option("--threads", o.threads, "worker threads (default: hardware concurrency)");

  auto* palette = app.add_subcommand("palette", "kernel analysis of weight generators on a palette");
  add_common(palette);
  palette->add_option("--set", o.set, "comma separated palette, e.g. 0,1,2,4");
  palette->add_flag("--all-candidates", o.all_candidates, "analyze every candidate palette for p");

  auto* verify = app.add_subcommand("verify", "exhaustive verification suites");
  add_diagram(verify);
  add_common(verify);
  verify->add_option("--suite", o.suite, "cocycle, chain or weights")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return input_error;
  }

  try {
    require_odd_prime(o.p);
    if (colorings->parsed()) {
      Diagram d = resolve_diagram(o);
      return emit("colorings", o, d, [&] { return run_colorings(o, d); }, csv_colorings);
    }
    if (invariant->parsed()) {
      Diagram d = resolve_diagram(o);
      return emit("invariant", o, d, [&] { return run_invariant(o, d); }, csv_invariant);
    }
    if (palette->parsed())
      return emit("palette", o, std::nullopt, [&] { return run_palette(o); }, csv_palette);
    std::optional<Diagram> d;
    if (!o.pd_text.empty() || !o.knot.empty())
      d = resolve_diagram(o);
    return emit("verify", o, d, [&] { return run_verify(o, d); }, csv_verify);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return budget_exceeded;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return verification_failed;
  }
}
