#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dehn/errors.hpp"

namespace dehn {

using edge_label = std::int64_t;

/// Planar diagram code of a knot.
///
/// Each crossing lists the four edge ends counterclockwise, starting with the
/// incoming under-strand edge. A code with no crossings is the round unknot.
struct PDCode {
  std::vector<std::array<edge_label, 4>> crossings;

  std::size_t crossing_count() const noexcept { return crossings.size(); }
  bool is_unknot_circle() const noexcept { return crossings.empty(); }

  static PDCode unknot() { return {}; }

  friend bool operator==(const PDCode&, const PDCode&) = default;
};

namespace detail {

class PDScanner {
public:
  explicit PDScanner(std::string_view text) : text_(text) {}

  PDCode parse() {
    PDCode pd;
    skip_separators();
    while (pos_ < text_.size()) {
      pd.crossings.push_back(parse_term());
      skip_separators();
    }
    return pd;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("PD syntax error at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  void skip_separators() {
    while (pos_ < text_.size() && (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == ';'))
      ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  edge_label parse_label() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_)
      fail("expected a positive integer edge label");
    if (pos_ - start > 15)
      fail("edge label too long");
    edge_label v = std::stoll(std::string(text_.substr(start, pos_ - start)));
    if (v <= 0)
      fail("edge labels must be positive");
    return v;
  }

  std::array<edge_label, 4> parse_term() {
    skip_space();
    if (pos_ >= text_.size() || (text_[pos_] != 'X' && text_[pos_] != 'x'))
      fail("expected crossing term X(a,b,c,d)");
    ++pos_;
    skip_space();
    if (pos_ >= text_.size() || (text_[pos_] != '(' && text_[pos_] != '['))
      fail("expected '(' after X");
    char close = text_[pos_] == '(' ? ')' : ']';
    ++pos_;
    std::array<edge_label, 4> term{};
    for (std::size_t i = 0; i < 4; ++i) {
      term[i] = parse_label();
      skip_space();
      if (i < 3) {
        if (pos_ < text_.size() && text_[pos_] == close)
          fail("crossing term has " + std::to_string(i + 1) + " labels, expected 4");
        expect(',');
      }
    }
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ',')
      fail("crossing term has more than 4 labels");
    expect(close);
    return term;
  }
};

inline std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

} // namespace detail

/// Checks the double-occurrence rule and that the strands form one closed
/// component. Throws InputError otherwise.
inline void validate_pd_code(const PDCode& pd) {
  std::map<edge_label, int> occurrences;
  for (const auto& x : pd.crossings)
    for (edge_label e : x) {
      if (e <= 0)
        throw InputError("edge labels must be positive, got " + std::to_string(e));
      ++occurrences[e];
    }
  for (const auto& [label, count] : occurrences)
    if (count != 2)
      throw InputError("edge label " + std::to_string(label) + " occurs " + std::to_string(count) +
                       " times; every label must occur exactly twice");
  if (pd.crossings.empty())
    return;

  // Edges are joined through each crossing along the under strand (e1-e3) and
  // the over strand (e2-e4). A knot leaves a single class.
  std::map<edge_label, std::size_t> index;
  for (const auto& [label, count] : occurrences)
    index.emplace(label, index.size());
  std::vector<std::size_t> parent(index.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto unite = [&](edge_label a, edge_label b) {
    parent[detail::find_root(parent, index.at(a))] = detail::find_root(parent, index.at(b));
  };
  for (const auto& x : pd.crossings) {
    unite(x[0], x[2]);
    unite(x[1], x[3]);
  }
  std::size_t root = detail::find_root(parent, 0);
  for (std::size_t i = 1; i < parent.size(); ++i)
    if (detail::find_root(parent, i) != root)
      throw InputError("PD code has more than one component; only knots are supported");
}

namespace detail {

inline PDCode pd_from_json(const nlohmann::json& j) {
  const nlohmann::json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("pd"))
      throw InputError("JSON PD object must have a \"pd\" member");
    arr = &j.at("pd");
  }
  if (!arr->is_array())
    throw InputError("JSON PD code must be an array of 4-element arrays");
  PDCode pd;
  for (const auto& term : *arr) {
    if (!term.is_array() || term.size() != 4)
      throw InputError("JSON PD crossing must be an array of exactly 4 labels");
    std::array<edge_label, 4> x{};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!term[i].is_number_integer())
        throw InputError("JSON PD labels must be integers");
      x[i] = term[i].get<edge_label>();
    }
    pd.crossings.push_back(x);
  }
  return pd;
}

} // namespace detail

/// Parses `X(a,b,c,d)` terms separated by `;` or whitespace (square brackets
/// are accepted too), or the JSON forms `[[a,b,c,d],...]` and `{"pd": [...]}`.
///
/// Blank text is rejected. An explicit empty JSON array denotes the unknot.
inline PDCode parse_pd_code(std::string_view text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    throw InputError("empty PD code");
  PDCode pd;
  if (text[first] == '[' || text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("PD JSON syntax error: ") + e.what());
    }
    pd = detail::pd_from_json(j);
  } else {
    pd = detail::PDScanner(text).parse();
    if (pd.crossings.empty())
      throw InputError("empty PD code");
  }
  validate_pd_code(pd);
  return pd;
}

/// Text form; the crossingless unknot prints as "[]" so it parses back.
inline std::string to_string(const PDCode& pd) {
  if (pd.crossings.empty())
    return "[]";
  std::string out;
  for (std::size_t k = 0; k < pd.crossings.size(); ++k) {
    if (k)
      out += ';';
    const auto& x = pd.crossings[k];
    out += "X(" + std::to_string(x[0]) + ',' + std::to_string(x[1]) + ',' + std::to_string(x[2]) + ',' +
           std::to_string(x[3]) + ')';
  }
  return out;
}

} // namespace dehn
