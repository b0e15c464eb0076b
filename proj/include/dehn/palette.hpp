#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dehn/coloring.hpp"
#include "dehn/errors.hpp"
#include "dehn/integer_kernel.hpp"
#include "dehn/lb_algebra.hpp"
#include "dehn/modular.hpp"
#include "dehn/theta.hpp"

namespace dehn {

namespace detail {

inline std::vector<residue> normalized_set(const std::vector<residue>& s, residue p) {
  std::set<residue> out;
  for (residue x : s)
    out.insert(mod(x, p));
  return {out.begin(), out.end()};
}

} // namespace detail

/// Lexicographically least sorted image of S under x -> sx+t.
inline ColorPalette affine_canonical_palette(const std::vector<residue>& S, residue p) {
  require_odd_prime(p);
  std::vector<residue> base = detail::normalized_set(S, p);
  if (base.empty())
    throw InputError("palette must be nonempty");
  std::vector<residue> best = base;
  std::vector<residue> img(base.size());
  for (residue s = 1; s < p; ++s)
    for (residue t = 0; t < p; ++t) {
      for (std::size_t i = 0; i < base.size(); ++i)
        img[i] = mod(s * base[i] + t, p);
      std::sort(img.begin(), img.end());
      if (img < best)
        best = img;
    }
  return {p, best};
}

inline ColorPalette affine_canonical_palette(const ColorPalette& S) { return affine_canonical_palette(S.elements, S.p); }

inline constexpr std::array<residue, 10> candidate_primes{3, 5, 7, 11, 13, 17, 19, 23, 29, 31};

/// Minimal-palette candidates up to affine equivalence, as listed in the literature.
inline std::vector<ColorPalette> candidate_palettes(residue p) {
  using L = std::vector<std::vector<residue>>;
  L sets;
  switch (p) {
  case 3:
    sets = {{0, 1, 2}};
    break;
  case 5:
    sets = {{0, 1, 2, 3}};
    break;
  case 7:
    sets = {{0, 1, 2, 4}};
    break;
  case 11:
    sets = {{0, 1, 2, 3, 6}, {0, 1, 2, 4, 7}};
    break;
  case 13:
    sets = {{0, 1, 2, 4, 7}};
    break;
  case 17:
    sets = {{0, 1, 2, 3, 5, 9},  {0, 1, 2, 3, 5, 10}, {0, 1, 2, 3, 5, 12}, {0, 1, 2, 3, 6, 9},
            {0, 1, 2, 3, 6, 10}, {0, 1, 2, 3, 6, 11}, {0, 1, 2, 3, 6, 13}, {0, 1, 2, 3, 7, 11},
            {0, 1, 2, 4, 5, 9},  {0, 1, 2, 4, 5, 10}, {0, 1, 2, 4, 5, 12}, {0, 1, 2, 4, 10, 13}};
    break;
  case 19:
    sets = {{0, 1, 2, 3, 5, 10}, {0, 1, 2, 3, 6, 10}, {0, 1, 2, 3, 6, 11}, {0, 1, 2, 3, 6, 12},
            {0, 1, 2, 3, 6, 13}, {0, 1, 2, 3, 6, 14}, {0, 1, 2, 3, 7, 12}, {0, 1, 2, 4, 5, 10},
            {0, 1, 2, 4, 5, 14}, {0, 1, 2, 4, 7, 12}, {0, 1, 2, 4, 7, 15}};
    break;
  case 23:
    sets = {{0, 1, 2, 3, 6, 12}, {0, 1, 2, 4, 7, 12}, {0, 1, 2, 4, 7, 13},
            {0, 1, 2, 4, 7, 14}, {0, 1, 2, 4, 9, 14}, {0, 1, 2, 4, 10, 19}};
    break;
  case 29:
    sets = {{0, 1, 2, 4, 8, 15}};
    break;
  case 31:
    sets = {{0, 1, 2, 4, 8, 16}};
    break;
  default:
    throw InputError("no candidate palette list for p=" + std::to_string(p) +
                     " (supported: 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)");
  }
  std::vector<ColorPalette> out;
  for (auto& s : sets)
    out.push_back({p, std::move(s)});
  return out;
}

struct WeightGenerators {
  std::vector<Gen2Key> free;        ///< canonical, lexicographic order
  std::vector<TorsionKey2> torsion; ///< ((a,a),(a,b)) with a < b
};

/// Weight generators supported on S: canonical free generators with
/// a, b, c and [a,b,c] all in S, and the torsion generators on S.
inline WeightGenerators weight_generators(const std::vector<residue>& S, residue p) {
  require_odd_prime(p);
  std::vector<residue> s = detail::normalized_set(S, p);
  std::set<residue> in(s.begin(), s.end());
  WeightGenerators out;
  for (residue a : s)
    for (residue b : s)
      for (residue c : s) {
        Gen2Key g{a, b, c};
        if (in.count(tribracket(a, b, c, p)) && is_canonical_free_gen2(g, p))
          out.free.push_back(g);
      }
  std::sort(out.free.begin(), out.free.end());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      out.torsion.push_back({s[i], s[j]});
  return out;
}

enum class PaletteVerdict { theta_trivial, not_theta_trivial };

inline std::string to_string(PaletteVerdict v) {
  return v == PaletteVerdict::theta_trivial ? "theta-trivial" : "not-theta-trivial";
}

inline constexpr std::size_t max_palette_generators = 1000;

struct KernelAnalysis {
  ColorPalette palette;
  std::vector<Gen2Key> generators;
  std::vector<TorsionKey2> torsion;
  std::vector<Gen1Key> row_labels; ///< free C_1 generators (x,y), x < y
  IntMatrix matrix;                ///< rows x generators
  IntMatrix kernel_basis;          ///< one vector per row, Hermite form
  std::vector<residue> theta_values;
  PaletteVerdict verdict = PaletteVerdict::theta_trivial;
  std::string relations;
};

namespace detail {

inline std::string t_name(std::size_t i) { return "t" + std::to_string(i + 1); }

/// Describes the coefficient lattice in the "t1 = -t2 = t3; t4 = t5 = 0" style.
inline std::string relation_string(const IntMatrix& basis, std::size_t n) {
  if (n == 0)
    return "no free generators";
  std::vector<std::size_t> zero, live;
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (const auto& v : basis)
      any = any || v[i] != 0;
    (any ? live : zero).push_back(i);
  }
  std::vector<std::string> parts;
  if (basis.size() == 1) {
    const auto& v = basis[0];
    const std::int64_t lead = v[live.front()];
    bool unit = true;
    for (std::size_t i : live)
      unit = unit && std::llabs(v[i]) == std::llabs(lead);
    std::string s;
    if (unit) {
      for (std::size_t k = 0; k < live.size(); ++k) {
        const std::size_t i = live[k];
        if (k)
          s += " = ";
        if ((v[i] < 0) != (lead < 0))
          s += "-";
        s += t_name(i);
      }
    } else {
      s = "(";
      for (std::size_t k = 0; k < live.size(); ++k)
        s += (k ? ", " : "") + t_name(live[k]);
      s += ") = k*(";
      for (std::size_t k = 0; k < live.size(); ++k)
        s += (k ? ", " : "") + std::to_string(v[live[k]]);
      s += ")";
    }
    parts.push_back(s);
  } else if (basis.size() > 1) {
    std::string s = "(";
    for (std::size_t k = 0; k < live.size(); ++k)
      s += (k ? ", " : "") + t_name(live[k]);
    s += ") in span{";
    for (std::size_t b = 0; b < basis.size(); ++b) {
      s += b ? ", (" : "(";
      for (std::size_t k = 0; k < live.size(); ++k)
        s += (k ? ", " : "") + std::to_string(basis[b][live[k]]);
      s += ")";
    }
    parts.push_back(s + "}");
  }
  if (!zero.empty()) {
    std::string s;
    for (std::size_t k = 0; k < zero.size(); ++k)
      s += (k ? " = " : "") + t_name(zero[k]);
    parts.push_back(s + " = 0");
  }
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k)
    out += (k ? "; " : "") + parts[k];
  return out;
}

} // namespace detail

/// Solves the free part of boundary_2(W) = 0 over the integers for weights
/// supported on S, then evaluates theta_p on the kernel basis. Torsion rows
/// (x,x) are dropped, which can only enlarge the kernel.
inline KernelAnalysis kernel_analysis(const std::vector<residue>& S, residue p) {
  require_odd_prime(p);
  KernelAnalysis ka;
  ka.palette = {p, detail::normalized_set(S, p)};
  if (ka.palette.elements.empty())
    throw InputError("palette must be nonempty");
  WeightGenerators gens = weight_generators(ka.palette.elements, p);
  if (gens.free.size() > max_palette_generators)
    throw BudgetExceeded("palette has " + std::to_string(gens.free.size()) + " free generators (limit " +
                         std::to_string(max_palette_generators) + ")");
  ka.generators = gens.free;
  ka.torsion = gens.torsion;

  const auto& el = ka.palette.elements;
  std::map<Gen1Key, std::size_t> row_of;
  for (std::size_t i = 0; i < el.size(); ++i)
    for (std::size_t j = i + 1; j < el.size(); ++j) {
      row_of[{el[i], el[j]}] = ka.row_labels.size();
      ka.row_labels.push_back({el[i], el[j]});
    }
  const std::size_t n = ka.generators.size();
  ka.matrix.assign(ka.row_labels.size(), IntVector(n, 0));
  for (std::size_t col = 0; col < n; ++col) {
    const auto& g = ka.generators[col];
    NormalChain1 d = boundary2(RawGen2{g[0], g[1], g[2]}, p);
    for (const auto& [key, k] : d.free) {
      auto it = row_of.find(key);
      if (it == row_of.end())
        throw InvariantViolation("boundary leaves the palette");
      ka.matrix[it->second][col] = k;
    }
  }

  ka.kernel_basis = integer_kernel_basis(ka.matrix, n);
  ThetaCocycle theta(p);
  ka.verdict = PaletteVerdict::theta_trivial;
  for (const auto& v : ka.kernel_basis) {
    residue sum = 0;
    for (std::size_t i = 0; i < n; ++i)
      sum = mod(sum + mod(v[i], p) * theta(RawGen2{ka.generators[i][0], ka.generators[i][1], ka.generators[i][2]}),
                p);
    ka.theta_values.push_back(sum);
    if (sum != 0)
      ka.verdict = PaletteVerdict::not_theta_trivial;
  }
  ka.relations = detail::relation_string(ka.kernel_basis, n);
  return ka;
}

inline KernelAnalysis kernel_analysis(const ColorPalette& S) { return kernel_analysis(S.elements, S.p); }

/// What a theta-trivial verdict for every candidate palette means at p.
inline std::string verdict_scope(residue p) {
  if (p == 7 || p == 11 || p == 19 || p == 23 || p == 31)
    return "supports-phi-bound-route";
  if (p == 13 || p == 29)
    return "kernel-only (connectivity argument required)";
  return "informational";
}

struct PaletteSurvey {
  residue p = 0;
  std::vector<KernelAnalysis> analyses;
  bool all_theta_trivial = true;
  std::string scope;
};

inline PaletteSurvey analyze_all(residue p) {
  PaletteSurvey out{p, {}, true, verdict_scope(p)};
  for (const auto& s : candidate_palettes(p)) {
    out.analyses.push_back(kernel_analysis(s));
    if (out.analyses.back().verdict != PaletteVerdict::theta_trivial)
      out.all_theta_trivial = false;
  }
  return out;
}

} // namespace dehn
