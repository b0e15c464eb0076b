#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/tokenizer.hpp>
#include <json.hpp>

#include "dehn/coloring.hpp"
#include "dehn/errors.hpp"
#include "dehn/pd_code.hpp"
#include "dehn/topology.hpp"

namespace dehn {

struct KnotTableEntry {
  std::string name;
  PDCode pd;
  std::optional<int> crossing_number;
  std::optional<std::int64_t> determinant;
};

/// |det| of the crossing-by-region relation matrix with the two regions on
/// either side of one edge removed. This is the knot determinant.
inline std::int64_t knot_determinant(const DiagramTopology& topo) {
  const std::size_t c = topo.crossing_count;
  if (c == 0)
    return 1;
  const auto [left, right] = topo.edge_sides.begin()->second;
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < topo.region_count; ++r)
    if (static_cast<region_id>(r) != left && static_cast<region_id>(r) != right)
      keep.push_back(r);
  if (keep.size() != c)
    throw InvariantViolation("unexpected region count in determinant");
  std::vector<std::vector<__int128>> m(c, std::vector<__int128>(c, 0));
  for (crossing_id k = 0; k < c; ++k) {
    CrossingCorners x = crossing_corners(topo, k);
    std::vector<__int128> full(topo.region_count, 0);
    full[static_cast<std::size_t>(x.x1)] += 1;
    full[static_cast<std::size_t>(x.x3)] += 1;
    full[static_cast<std::size_t>(x.x2)] -= 1;
    full[static_cast<std::size_t>(x.x4)] -= 1;
    for (std::size_t j = 0; j < c; ++j)
      m[k][j] = full[keep[j]];
  }
  // Bareiss fraction-free elimination.
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t i = 0; i < c; ++i) {
    std::size_t piv = i;
    while (piv < c && m[piv][i] == 0)
      ++piv;
    if (piv == c)
      return 0;
    if (piv != i) {
      std::swap(m[piv], m[i]);
      sign = -sign;
    }
    for (std::size_t r = i + 1; r < c; ++r) {
      for (std::size_t col = i + 1; col < c; ++col)
        m[r][col] = (m[r][col] * m[i][i] - m[r][i] * m[i][col]) / prev;
      m[r][i] = 0;
    }
    prev = m[i][i];
  }
  __int128 d = m[c - 1][c - 1] * sign;
  if (d < 0)
    d = -d;
  if (d > INT64_MAX)
    throw BudgetExceeded("determinant exceeds 64 bits");
  return static_cast<std::int64_t>(d);
}

/// Checks the PD code and any stated determinant: the computed determinant
/// must match, and for each small odd prime p the diagram must have
/// nontrivial p-colorings exactly when p divides it.
inline void validate_entry(const KnotTableEntry& e) {
  validate_pd_code(e.pd);
  DiagramTopology topo = extract_topology(e.pd);
  const std::int64_t det = knot_determinant(topo);
  if (e.determinant && *e.determinant != det)
    throw InputError("knot " + e.name + ": stated determinant " + std::to_string(*e.determinant) +
                     " but the PD code gives " + std::to_string(det));
  if (e.crossing_number && *e.crossing_number > static_cast<int>(topo.crossing_count))
    throw InputError("knot " + e.name + ": crossing number exceeds the diagram's crossings");
  for (residue p : {3, 5, 7, 11, 13}) {
    const bool colorable = coloring_space(topo, p).dimension() > 2;
    if (colorable != (det % p == 0))
      throw InvariantViolation("knot " + e.name + ": colorability at p=" + std::to_string(p) +
                               " disagrees with the determinant");
  }
}

inline std::vector<KnotTableEntry> builtin_knot_table() {
  struct Row {
    const char* name;
    const char* pd;
    int crossings;
    std::int64_t det;
  };
  static const Row rows[] = {
      {"unknot", "[]", 0, 1},
      {"trefoil", "X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)", 3, 3},
      {"4_1", "X(4,2,5,1);X(8,6,1,5);X(6,3,7,4);X(2,7,3,8)", 4, 5},
      {"5_1", "X(1,6,2,7);X(3,8,4,9);X(5,10,6,1);X(7,2,8,3);X(9,4,10,5)", 5, 5},
      {"5_2", "X(1,4,2,5);X(3,8,4,9);X(5,10,6,1);X(9,6,10,7);X(7,2,8,3)", 5, 7},
  };
  std::vector<KnotTableEntry> out;
  for (const auto& r : rows)
    out.push_back({r.name, parse_pd_code(r.pd), r.crossings, r.det});
  return out;
}

namespace detail {

inline void add_unique(std::vector<KnotTableEntry>& table, std::map<std::string, std::size_t>& seen,
                       KnotTableEntry e, const std::string& where) {
  if (e.name.empty())
    throw InputError(where + ": empty knot name");
  if (seen.count(e.name))
    throw InputError(where + ": duplicate knot name \"" + e.name + "\"");
  try {
    validate_entry(e);
  } catch (const InputError& err) {
    throw InputError(where + ": " + err.what());
  }
  seen[e.name] = table.size();
  table.push_back(std::move(e));
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace detail

/// CSV with columns name,pd[,crossings[,determinant]]. A first line starting
/// with "name" is a header; blank lines and lines starting with # are skipped.
inline std::vector<KnotTableEntry> load_knot_table_csv(std::istream& in, const std::string& source = "<csv>") {
  std::vector<KnotTableEntry> table;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  using Sep = boost::escaped_list_separator<char>;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#')
      continue;
    if (std::count(t.begin(), t.end(), '"') % 2 != 0)
      throw InputError(where + ": malformed CSV (unterminated quote)");
    std::vector<std::string> fields;
    try {
      boost::tokenizer<Sep> tok(t, Sep('\\', ',', '"'));
      for (const auto& f : tok)
        fields.push_back(detail::trim(f));
    } catch (const boost::escaped_list_error& e) {
      throw InputError(where + ": malformed CSV (" + e.what() + ")");
    }
    if (lineno == 1 && !fields.empty() && fields[0] == "name")
      continue;
    if (fields.size() < 2 || fields.size() > 4)
      throw InputError(where + ": expected name,pd[,crossings[,determinant]]");
    KnotTableEntry e;
    e.name = fields[0];
    try {
      e.pd = parse_pd_code(fields[1]);
    } catch (const InputError& err) {
      throw InputError(where + ": " + err.what());
    }
    auto number = [&](const std::string& s, const char* what) -> std::optional<std::int64_t> {
      if (s.empty())
        return std::nullopt;
      char* end = nullptr;
      long long v = std::strtoll(s.c_str(), &end, 10);
      if (*end != '\0' || v < 0)
        throw InputError(where + ": bad " + what + " \"" + s + "\"");
      return v;
    };
    if (fields.size() > 2)
      if (auto v = number(fields[2], "crossing number"))
        e.crossing_number = static_cast<int>(*v);
    if (fields.size() > 3)
      e.determinant = number(fields[3], "determinant");
    detail::add_unique(table, seen, std::move(e), where);
  }
  return table;
}

/// JSON: [{"name":"5_2","pd":"X(...)" or [[...]], "crossings":5, "determinant":7}, ...]
/// or {"knots":[...]}.
inline std::vector<KnotTableEntry> load_knot_table_json(std::istream& in, const std::string& source = "<json>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
  const nlohmann::json* list = &doc;
  if (doc.is_object() && doc.contains("knots"))
    list = &doc["knots"];
  if (!list->is_array())
    throw InputError(source + ": expected an array of knots");
  std::vector<KnotTableEntry> table;
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const auto& item = (*list)[i];
    const std::string where = source + ": entry " + std::to_string(i);
    if (!item.is_object() || !item.contains("name") || !item.contains("pd") || !item["name"].is_string())
      throw InputError(where + ": needs \"name\" and \"pd\"");
    KnotTableEntry e;
    e.name = item["name"].get<std::string>();
    try {
      e.pd = item["pd"].is_string() ? parse_pd_code(item["pd"].get<std::string>()) : detail::pd_from_json(item["pd"]);
      if (item.contains("crossings"))
        e.crossing_number = item["crossings"].get<int>();
      if (item.contains("determinant"))
        e.determinant = item["determinant"].get<std::int64_t>();
    } catch (const nlohmann::json::exception& err) {
      throw InputError(where + ": " + err.what());
    } catch (const InputError& err) {
      throw InputError(where + ": " + err.what());
    }
    detail::add_unique(table, seen, std::move(e), where);
  }
  return table;
}

/// Dispatches on the extension: .json for JSON, anything else is CSV.
inline std::vector<KnotTableEntry> load_knot_table(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open knot table " + path);
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? load_knot_table_json(in, path) : load_knot_table_csv(in, path);
}

inline const KnotTableEntry& find_knot(const std::vector<KnotTableEntry>& table, const std::string& name) {
  for (const auto& e : table)
    if (e.name == name)
      return e;
  throw InputError("unknown knot \"" + name + "\"");
}

} // namespace dehn
