#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dehn/modular.hpp"

namespace dehn {

/// The Dehn tribracket [a,b,c] = a - b + c on Z_p.
constexpr residue tribracket(residue a, residue b, residue c, residue p) noexcept { return mod(a - b + c, p); }

/// An element (a,b) of X^2.
struct ColorPair {
  residue first = 0;
  residue second = 0;

  friend bool operator==(const ColorPair&, const ColorPair&) = default;
  friend auto operator<=>(const ColorPair&, const ColorPair&) = default;
};

constexpr ColorPair rho(ColorPair x) noexcept { return {x.second, x.first}; }

inline void require_shared_first(ColorPair x, ColorPair y) {
  if (x.first != y.first)
    throw std::invalid_argument("local biquandle operations need a shared first coordinate");
}

/// (a,b) under-star (a,c) = (c, [a,b,c]).
inline ColorPair op_under(ColorPair x, ColorPair y, residue p) {
  require_shared_first(x, y);
  return {y.second, tribracket(x.first, x.second, y.second, p)};
}

/// (a,b) over-star (a,c) = (c, [a,c,b]).
inline ColorPair op_over(ColorPair x, ColorPair y, residue p) {
  require_shared_first(x, y);
  return {y.second, tribracket(x.first, y.second, x.second, p)};
}

/// Raw degree-2 generator ((a,b),(a,c)).
struct RawGen2 {
  residue a = 0, b = 0, c = 0;

  friend bool operator==(const RawGen2&, const RawGen2&) = default;
  friend auto operator<=>(const RawGen2&, const RawGen2&) = default;
};

using QTuple = std::array<residue, 4>;

/// The four tuples (a,b,c,d), (b,a,d,c), (c,d,a,b), (d,c,b,a) with d = [a,b,c].
inline std::array<QTuple, 4> q_orbit(residue a, residue b, residue c, residue p) {
  residue d = tribracket(a, b, c, p);
  return {QTuple{a, b, c, d}, QTuple{b, a, d, c}, QTuple{c, d, a, b}, QTuple{d, c, b, a}};
}

/// Lexicographic minimum of the orbit (residues ordered as 0 < 1 < ... < p-1).
inline QTuple q_min(residue a, residue b, residue c, residue p) {
  auto orbit = q_orbit(a, b, c, p);
  return *std::min_element(orbit.begin(), orbit.end());
}

/// Free-part key of C_2^SLB: ((a,b),(a,c)) stored as {a,b,c}.
using Gen2Key = std::array<residue, 3>;
/// Torsion key of C_2^SLB: ((a,a),(a,b)) with a < b stored as {a,b}.
using TorsionKey2 = std::array<residue, 2>;
/// Free key of C_1^SLB: (a,b) with a < b.
using Gen1Key = std::array<residue, 2>;

inline bool is_canonical_free_gen2(Gen2Key g, residue p) {
  if (g[0] == g[1] || g[1] == g[2])
    return false;
  QTuple own{g[0], g[1], g[2], tribracket(g[0], g[1], g[2], p)};
  return own == q_min(g[0], g[1], g[2], p);
}

/// Element of C_2^SLB in normal form: integer coefficients on canonical free
/// generators plus a set of torsion generators with coefficient 1 mod 2.
struct NormalChain2 {
  std::map<Gen2Key, std::int64_t> free;
  std::set<TorsionKey2> torsion;

  bool is_zero() const noexcept { return free.empty() && torsion.empty(); }

  void add_free(Gen2Key g, std::int64_t k) {
    if (k == 0)
      return;
    auto& v = free[g];
    v += k;
    if (v == 0)
      free.erase(g);
  }

  void add_torsion(TorsionKey2 g, std::int64_t k) {
    if (k % 2 == 0)
      return;
    if (!torsion.erase(g))
      torsion.insert(g);
  }

  NormalChain2& operator+=(const NormalChain2& o) {
    for (const auto& [g, k] : o.free)
      add_free(g, k);
    for (const auto& g : o.torsion)
      add_torsion(g, 1);
    return *this;
  }

  NormalChain2 scaled(std::int64_t k) const {
    NormalChain2 out;
    for (const auto& [g, v] : free)
      out.add_free(g, v * k);
    for (const auto& g : torsion)
      out.add_torsion(g, k);
    return out;
  }

  friend NormalChain2 operator+(NormalChain2 a, const NormalChain2& b) { return a += b; }
  friend NormalChain2 operator-(const NormalChain2& a) { return a.scaled(-1); }
  friend bool operator==(const NormalChain2&, const NormalChain2&) = default;
};

/// Element of C_1^SLB in normal form.
struct NormalChain1 {
  std::map<Gen1Key, std::int64_t> free;
  std::set<residue> torsion;

  bool is_zero() const noexcept { return free.empty() && torsion.empty(); }

  /// Adds k*(x,y), rewriting (x,y) = -(y,x) and 2(x,x) = 0.
  void add_pair(residue x, residue y, std::int64_t k) {
    if (k == 0)
      return;
    if (x == y) {
      if (k % 2 != 0 && !torsion.erase(x))
        torsion.insert(x);
      return;
    }
    Gen1Key key = x < y ? Gen1Key{x, y} : Gen1Key{y, x};
    auto& v = free[key];
    v += x < y ? k : -k;
    if (v == 0)
      free.erase(key);
  }

  NormalChain1& operator+=(const NormalChain1& o) {
    for (const auto& [g, k] : o.free)
      add_pair(g[0], g[1], k);
    for (residue a : o.torsion)
      add_pair(a, a, 1);
    return *this;
  }

  friend bool operator==(const NormalChain1&, const NormalChain1&) = default;
};

/// sign * ((a,b),(a,c)) rewritten into the normal form of C_2^SLB.
inline NormalChain2 normalize_gen2(RawGen2 g, std::int64_t sign, residue p) {
  NormalChain2 out;
  const residue a = g.a, b = g.b, c = g.c;
  if (b == c)
    return out;
  if (a == b) {
    residue lo = std::min(a, c), hi = std::max(a, c);
    out.add_torsion({lo, hi}, sign);
    return out;
  }
  auto orbit = q_orbit(a, b, c, p);
  std::size_t which = static_cast<std::size_t>(std::min_element(orbit.begin(), orbit.end()) - orbit.begin());
  const QTuple& m = orbit[which];
  // Orbit positions 1 and 2 carry a minus sign.
  std::int64_t s = (which == 1 || which == 2) ? -sign : sign;
  out.add_free({m[0], m[1], m[2]}, s);
  return out;
}

/// Boundary of ((a,b),(a,c)): -(a,c) + (a,b) + (b,[a,b,c]) - (c,[a,b,c]).
inline NormalChain1 boundary2(RawGen2 g, residue p) {
  residue d = tribracket(g.a, g.b, g.c, p);
  NormalChain1 out;
  out.add_pair(g.a, g.c, -1);
  out.add_pair(g.a, g.b, 1);
  out.add_pair(g.b, d, 1);
  out.add_pair(g.c, d, -1);
  return out;
}

inline NormalChain1 boundary2(const NormalChain2& chain, residue p) {
  NormalChain1 out;
  for (const auto& [g, k] : chain.free) {
    NormalChain1 term = boundary2(RawGen2{g[0], g[1], g[2]}, p);
    for (const auto& [key, v] : term.free)
      out.add_pair(key[0], key[1], v * k);
    if (k % 2 != 0)
      for (residue x : term.torsion)
        out.add_pair(x, x, 1);
  }
  for (const auto& t : chain.torsion)
    out += boundary2(RawGen2{t[0], t[0], t[1]}, p);
  return out;
}

// ---------------------------------------------------------------------------
// Raw chains of C_*^lb for property checks. A generator ((a,b_1),...,(a,b_n))
// is stored as the vector {a, b_1, ..., b_n}.

using RawTuple = std::vector<residue>;

struct RawChain {
  std::map<RawTuple, std::int64_t> terms;

  void add(const RawTuple& t, std::int64_t k) {
    if (k == 0)
      return;
    auto& v = terms[t];
    v += k;
    if (v == 0)
      terms.erase(t);
  }

  RawChain& operator+=(const RawChain& o) {
    for (const auto& [t, k] : o.terms)
      add(t, k);
    return *this;
  }

  bool is_zero() const noexcept { return terms.empty(); }
};

inline constexpr std::size_t max_raw_degree = 4;

/// The lb boundary of ((a,b_1),...,(a,b_n)) for 1 <= n <= 4, before any quotient.
inline RawChain boundary_n_raw(std::size_t n, const RawTuple& gen, residue p) {
  if (n < 1 || n > max_raw_degree || gen.size() != n + 1)
    throw std::invalid_argument("boundary_n_raw supports 1 <= n <= 4 with an (n+1)-entry tuple");
  RawChain out;
  if (n == 1)
    return out;
  const residue a = gen[0];
  for (std::size_t i = 1; i <= n; ++i) {
    const std::int64_t sign = (i % 2 == 0) ? 1 : -1;
    RawTuple face{a};
    RawTuple moved{gen[i]};
    for (std::size_t j = 1; j <= n; ++j) {
      if (j == i)
        continue;
      face.push_back(gen[j]);
      moved.push_back(j < i ? tribracket(a, gen[j], gen[i], p) : tribracket(a, gen[i], gen[j], p));
    }
    out.add(face, sign);
    out.add(moved, -sign);
  }
  return out;
}

inline RawChain boundary_raw(std::size_t n, const RawChain& chain, residue p) {
  RawChain out;
  for (const auto& [t, k] : chain.terms) {
    RawChain b = boundary_n_raw(n, t, p);
    for (const auto& [u, v] : b.terms)
      out.add(u, v * k);
  }
  return out;
}

/// The partner of a generator in the i-th rho-relation (1-based i):
/// (ab_1 * ab_i, ..., rho(ab_i), ab_{i+1} o ab_i, ...).
inline RawTuple rho_partner(const RawTuple& gen, std::size_t i, residue p) {
  const residue a = gen[0];
  const std::size_t n = gen.size() - 1;
  RawTuple out{gen[i]};
  for (std::size_t j = 1; j <= n; ++j) {
    if (j < i)
      out.push_back(tribracket(a, gen[j], gen[i], p));
    else if (j == i)
      out.push_back(a);
    else
      out.push_back(tribracket(a, gen[i], gen[j], p));
  }
  return out;
}

/// Reduces a raw degree-2 chain into C_2^SLB.
inline NormalChain2 normalize_raw2(const RawChain& chain, residue p) {
  NormalChain2 out;
  for (const auto& [t, k] : chain.terms) {
    if (t.size() != 3)
      throw std::invalid_argument("normalize_raw2 expects degree-2 generators");
    out += normalize_gen2(RawGen2{t[0], t[1], t[2]}, k, p);
  }
  return out;
}

/// Reduces a raw degree-1 chain into C_1^SLB.
inline NormalChain1 normalize_raw1(const RawChain& chain) {
  NormalChain1 out;
  for (const auto& [t, k] : chain.terms) {
    if (t.size() != 2)
      throw std::invalid_argument("normalize_raw1 expects degree-1 generators");
    out.add_pair(t[0], t[1], k);
  }
  return out;
}

} // namespace dehn
