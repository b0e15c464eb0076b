#pragma once

// Brute-force reference implementations used only by the tests. None of
// these share code paths with the library beyond the basic data types.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dehn/modular.hpp"
#include "dehn/pd_code.hpp"
#include "dehn/topology.hpp"

namespace oracle {

using dehn::residue;

/// PD code of the closure of a braid word on n strands. Generator +i / -i is
/// sigma_i^{+1} / sigma_i^{-1} (1-based). Braid runs upward, closure arcs pass
/// to the right.
inline dehn::PDCode braid_closure(const std::vector<int>& word, int strands) {
  std::vector<dehn::edge_label> start(static_cast<std::size_t>(strands)), cur;
  dehn::edge_label next = 1;
  for (auto& s : start)
    s = next++;
  cur = start;
  dehn::PDCode pd;
  for (int g : word) {
    const auto i = static_cast<std::size_t>(std::abs(g) - 1);
    const dehn::edge_label a = cur[i], b = cur[i + 1];
    const dehn::edge_label x = next++, y = next++; // x continues a (to i+1), y continues b (to i)
    // Ends counterclockwise from SW: a, b, x, y.
    if (g > 0)
      pd.crossings.push_back({a, b, x, y});
    else
      pd.crossings.push_back({b, x, y, a});
    cur[i] = y;
    cur[i + 1] = x;
  }
  // Close up: the last label on each strand becomes the first one.
  std::map<dehn::edge_label, dehn::edge_label> rename;
  for (std::size_t j = 0; j < cur.size(); ++j)
    rename[cur[j]] = start[j];
  for (auto& x : pd.crossings)
    for (auto& e : x)
      if (auto it = rename.find(e); it != rename.end())
        e = it->second;
  return pd;
}

/// True when the braid's permutation is a single cycle (closure is a knot).
inline bool closes_to_knot(const std::vector<int>& word, int strands) {
  std::vector<int> perm(static_cast<std::size_t>(strands));
  std::iota(perm.begin(), perm.end(), 0);
  for (int g : word)
    std::swap(perm[static_cast<std::size_t>(std::abs(g) - 1)], perm[static_cast<std::size_t>(std::abs(g))]);
  int len = 0, x = 0;
  do {
    x = perm[static_cast<std::size_t>(x)];
    ++len;
  } while (x != 0);
  return len == strands;
}

/// Random braid word on `strands` strands whose closure is a knot. An
/// n-cycle has parity n-1, so the length is bumped by one when needed.
template <typename Rng>
std::vector<int> random_knot_braid(Rng& rng, int strands, int length) {
  length = std::max(length, strands - 1);
  if ((length - (strands - 1)) % 2 != 0)
    ++length;
  std::uniform_int_distribution<int> gen(1, strands - 1);
  std::bernoulli_distribution sign(0.5);
  for (;;) {
    std::vector<int> w;
    for (int k = 0; k < length; ++k)
      w.push_back(sign(rng) ? gen(rng) : -gen(rng));
    if (closes_to_knot(w, strands))
      return w;
  }
}

inline std::vector<int> mirror_word(std::vector<int> w) {
  for (auto& g : w)
    g = -g;
  return w;
}

/// Every map regions -> Z_p satisfying the relation at every crossing, read
/// straight off the quadrants (opposite corner sums agree).
inline std::set<std::vector<residue>> brute_force_colorings(const dehn::DiagramTopology& topo, residue p) {
  std::set<std::vector<residue>> out;
  const std::size_t r = topo.region_count;
  std::vector<residue> c(r, 0);
  for (;;) {
    bool ok = true;
    for (const auto& q : topo.quadrants) {
      auto v = [&](int k) { return c[static_cast<std::size_t>(q[static_cast<std::size_t>(k)])]; };
      if ((v(0) + v(1) - v(2) - v(3)) % p != 0) {
        ok = false;
        break;
      }
    }
    if (ok)
      out.insert(c);
    std::size_t i = 0;
    while (i < r && ++c[i] == p)
      c[i++] = 0;
    if (i == r)
      break;
  }
  return out;
}

/// Trivial by definition: at every crossing the two opposite corners on each
/// diagonal carry equal colors.
inline bool brute_force_trivial(const dehn::DiagramTopology& topo, const std::vector<residue>& c) {
  for (const auto& q : topo.quadrants) {
    auto v = [&](int k) { return c[static_cast<std::size_t>(q[static_cast<std::size_t>(k)])]; };
    if (v(0) != v(2) || v(1) != v(3))
      return false;
  }
  return true;
}

/// theta_p computed with exact big integers and an exact division by p.
inline residue theta_bigint(residue p, residue a, residue b, residue c) {
  using boost::multiprecision::cpp_int;
  auto ipow = [](cpp_int x, residue e) {
    cpp_int r = 1;
    for (residue k = 0; k < e; ++k)
      r *= x;
    return r;
  };
  cpp_int num = ipow(cpp_int(a - b + 2 * c), p) + ipow(cpp_int(a + b), p) - 2 * ipow(cpp_int(a + c), p);
  if (num % p != 0)
    throw std::logic_error("numerator not divisible by p");
  cpp_int v = cpp_int(a - b) * (num / p);
  v %= p;
  if (v < 0)
    v += p;
  return static_cast<residue>(v);
}

/// Orbit sizes of a set of colorings under the group generated by
/// C -> gC and C -> C + 1 (g a primitive root), found by BFS.
inline std::map<std::vector<residue>, std::size_t> affine_orbits_bfs(const std::set<std::vector<residue>>& all,
                                                                    residue p) {
  residue g = 2;
  for (;; ++g) {
    residue x = 1;
    int order = 0;
    do {
      x = x * g % p;
      ++order;
    } while (x != 1);
    if (order == p - 1)
      break;
  }
  std::map<std::vector<residue>, std::size_t> sizes; // representative (min) -> size
  std::set<std::vector<residue>> seen;
  for (const auto& start : all) {
    if (seen.count(start))
      continue;
    std::vector<std::vector<residue>> orbit;
    std::queue<std::vector<residue>> q;
    q.push(start);
    seen.insert(start);
    while (!q.empty()) {
      auto c = q.front();
      q.pop();
      orbit.push_back(c);
      auto scaled = c, shifted = c;
      for (auto& v : scaled)
        v = v * g % p;
      for (auto& v : shifted)
        v = (v + 1) % p;
      for (auto* n : {&scaled, &shifted})
        if (seen.insert(*n).second)
          q.push(*n);
    }
    sizes[*std::min_element(orbit.begin(), orbit.end())] = orbit.size();
  }
  return sizes;
}

/// Structure of C_2^SLB obtained by signed union-find over all p^3 raw
/// generators, using only the defining relations: degenerate generators vanish
/// and g = -rho_i(g) for i = 1, 2.
struct SlbOracle {
  residue p;
  std::vector<std::size_t> parent;
  std::vector<int> sign_to_parent; // g = sign * parent
  std::vector<bool> zero_root, torsion_root;

  explicit SlbOracle(residue p_) : p(p_) {
    const auto n = static_cast<std::size_t>(p * p * p);
    parent.resize(n);
    std::iota(parent.begin(), parent.end(), 0);
    sign_to_parent.assign(n, 1);
    zero_root.assign(n, false);
    torsion_root.assign(n, false);
    for (residue a = 0; a < p; ++a)
      for (residue b = 0; b < p; ++b)
        for (residue c = 0; c < p; ++c) {
          const auto g = id(a, b, c);
          if (b == c)
            mark_zero(g);
          const residue d = ((a - b + c) % p + p) % p;
          // rho_1: ((a,b),(a,c)) + ((b,a),(b,[a,b,c])) = 0
          unite(g, id(b, a, d), -1);
          // rho_2: ((a,b),(a,c)) + ((c,[a,b,c]),(c,a)) = 0
          unite(g, id(c, d, a), -1);
        }
  }

  std::size_t id(residue a, residue b, residue c) const {
    return static_cast<std::size_t>((a * p + b) * p + c);
  }

  std::pair<std::size_t, int> find(std::size_t x) {
    int s = 1;
    std::size_t r = x;
    while (parent[r] != r) {
      s *= sign_to_parent[r];
      r = parent[r];
    }
    // Path compression with sign fix-up.
    std::size_t y = x;
    int sy = s;
    while (parent[y] != y) {
      std::size_t nxt = parent[y];
      int snext = sy * sign_to_parent[y];
      parent[y] = r;
      sign_to_parent[y] = sy;
      y = nxt;
      sy = snext;
    }
    return {r, s};
  }

  void mark_zero(std::size_t g) { zero_root[find(g).first] = true; }

  /// Adds the relation x = rel * y.
  void unite(std::size_t x, std::size_t y, int rel) {
    auto [rx, sx] = find(x);
    auto [ry, sy] = find(y);
    if (rx == ry) {
      if (sx != rel * sy)
        torsion_root[rx] = true;
      return;
    }
    // rx = sx*x = sx*rel*y = sx*rel*sy*ry
    parent[rx] = ry;
    sign_to_parent[rx] = sx * rel * sy;
    zero_root[ry] = zero_root[ry] || zero_root[rx];
    torsion_root[ry] = torsion_root[ry] || torsion_root[rx];
  }

  enum class Kind { zero, torsion, free };

  Kind kind(residue a, residue b, residue c) {
    auto r = find(id(a, b, c)).first;
    if (zero_root[r])
      return Kind::zero;
    return torsion_root[r] ? Kind::torsion : Kind::free;
  }

  /// (class root, sign) of a generator.
  std::pair<std::size_t, int> cls(residue a, residue b, residue c) { return find(id(a, b, c)); }
};

} // namespace oracle
