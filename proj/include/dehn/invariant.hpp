#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dehn/coloring.hpp"
#include "dehn/errors.hpp"
#include "dehn/lb_algebra.hpp"
#include "dehn/theta.hpp"
#include "dehn/topology.hpp"

namespace dehn {

/// Bumped whenever the weight sign or PD orientation convention changes.
inline constexpr const char* convention_version = "pd-ccw-under-in/q0-positive/v1";

struct WeightTerm {
  crossing_id crossing = 0;
  RawGen2 generator;
  int sign = 1;
};

/// W(D,C): signed crossing weights and their sum in C_2^SLB.
struct WeightSum {
  NormalChain2 chain;
  std::vector<WeightTerm> terms;
};

/// Weight of crossing k read from the region in corner `specified` (0..3).
///
/// The under-arc neighbour of corner i lies across the even-numbered edge end
/// bounding it (ends 0 and 2 belong to the under strand), the over-arc
/// neighbour across the odd one. With ends placed S, E, N, W the orientation
/// test gives sign +1 for corners 0 and 2 and -1 for corners 1 and 3.
inline WeightTerm crossing_weight(const DiagramTopology& topo, const DehnColoring& c, crossing_id k,
                                  int specified = 0) {
  if (k >= topo.crossing_count)
    throw InputError("unknown crossing id " + std::to_string(k));
  if (specified < 0 || specified > 3)
    throw std::invalid_argument("specified corner must be 0..3");
  const auto& q = topo.quadrants[k];
  const auto i = static_cast<std::size_t>(specified);
  const std::size_t prev = (i + 3) % 4, next = (i + 1) % 4;
  // Corner i is bounded by ends i and i+1; crossing end i leads to corner i-1.
  const std::size_t under_nb = (i % 2 == 0) ? prev : next;
  const std::size_t over_nb = (i % 2 == 0) ? next : prev;
  auto col = [&](std::size_t corner) { return c.colors[static_cast<std::size_t>(q[corner])]; };
  return {k, RawGen2{col(i), col(under_nb), col(over_nb)}, (i % 2 == 0) ? 1 : -1};
}

/// Sums the crossing weights and asserts the result is a 2-cycle.
inline WeightSum weight_sum(const DiagramTopology& topo, const DehnColoring& c) {
  WeightSum w;
  for (crossing_id k = 0; k < topo.crossing_count; ++k) {
    WeightTerm t = crossing_weight(topo, c, k);
    w.chain += normalize_gen2(t.generator, t.sign, c.p);
    w.terms.push_back(t);
  }
  if (!boundary2(w.chain, c.p).is_zero())
    throw InvariantViolation("weight sum is not a cycle");
  return w;
}

inline residue theta_of_weight(const ThetaCocycle& theta, const DiagramTopology& topo, const DehnColoring& c) {
  return evaluate(theta, weight_sum(topo, c).chain, c.p);
}

enum class PhiFlavor { all, nontrivial };

inline std::string to_string(PhiFlavor f) { return f == PhiFlavor::all ? "all" : "NT"; }

/// Multiset of cocycle values, stored as value -> multiplicity.
struct PhiMultiset {
  residue p = 0;
  PhiFlavor flavor = PhiFlavor::nontrivial;
  std::map<residue, std::uint64_t> counts;

  std::uint64_t total() const noexcept {
    std::uint64_t n = 0;
    for (const auto& [v, k] : counts)
      n += k;
    return n;
  }

  bool contains(residue v) const { return counts.count(v) != 0; }

  PhiMultiset& merge(const PhiMultiset& o) {
    for (const auto& [v, k] : o.counts)
      counts[v] += k;
    return *this;
  }

  friend bool operator==(const PhiMultiset&, const PhiMultiset&) = default;
};

/// Phi over all colorings or only the nontrivial ones. Enumeration is split
/// into contiguous index blocks over `threads` workers.
template <typename Cocycle = ThetaCocycle>
PhiMultiset phi_invariant(const DiagramTopology& topo, const ColoringSpace& space, const Cocycle& theta,
                          PhiFlavor flavor, unsigned threads = 1) {
  const std::uint64_t n = checked_coloring_count(space);
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(n, 64))));
  std::vector<PhiMultiset> partial(threads, PhiMultiset{space.p, flavor, {}});
  auto work = [&](unsigned w) {
    const std::uint64_t first = n * w / threads, last = n * (w + 1) / threads;
    auto& out = partial[w];
    for_each_coloring(space, first, last, [&](const DehnColoring& c) {
      if (flavor == PhiFlavor::nontrivial && classify_coloring(topo, c) == ColoringClass::trivial)
        return;
      ++out.counts[evaluate(theta, weight_sum(topo, c).chain, space.p)];
    });
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back(work, w);
    for (auto& t : pool)
      t.join();
  }
  PhiMultiset result{space.p, flavor, {}};
  for (const auto& part : partial)
    result.merge(part);
  return result;
}

/// theta(W(D, sC+t)) == s^2 theta(W(D, C)).
inline bool affine_law_check(const DiagramTopology& topo, const ThetaCocycle& theta, const DehnColoring& c, residue s,
                             residue t) {
  const residue p = c.p;
  const residue before = theta_of_weight(theta, topo, c);
  const residue after = theta_of_weight(theta, topo, apply_affine(c, s, t));
  return after == mod(mod(s * s, p) * before, p);
}

enum class BoundTag { log_bound, plus3_p13_p29, plus3_phi };

inline std::string to_string(BoundTag t) {
  switch (t) {
  case BoundTag::log_bound:
    return "log-bound";
  case BoundTag::plus3_p13_p29:
    return "plus3-p13-29";
  case BoundTag::plus3_phi:
    return "plus3-phi";
  }
  return "unknown";
}

/// Lower and upper bounds for the minimum number of Dehn p-colors.
struct BoundReport {
  residue p = 0;
  bool colorable = false;
  int lower = 0;
  BoundTag tag = BoundTag::log_bound;
  std::optional<std::size_t> upper;
  std::optional<DehnColoring> witness;
  std::string note;
};

/// Primes for which 0 not in Phi^NT lifts the bound to floor(log2 p) + 3.
inline constexpr std::array<residue, 5> phi_bound_primes{7, 11, 19, 23, 31};

inline bool unconditional_plus3(residue p) { return p == 13 || p == 29; }

inline bool phi_bound_applies(residue p) {
  return std::find(phi_bound_primes.begin(), phi_bound_primes.end(), p) != phi_bound_primes.end();
}

inline BoundReport mincol_bounds(const DiagramTopology& topo, const ColoringSpace& space, const PhiMultiset& phi_nt) {
  const residue p = space.p;
  BoundReport rep;
  rep.p = p;
  rep.lower = floor_log2(p) + 2;
  rep.tag = BoundTag::log_bound;
  rep.note = "mirror: values negate";
  if (phi_nt.flavor != PhiFlavor::nontrivial)
    throw std::invalid_argument("mincol_bounds needs the nontrivial-coloring multiset");
  if (phi_nt.total() == 0) {
    rep.colorable = false;
    rep.note = "not Dehn " + std::to_string(p) + "-colorable on this diagram; " + rep.note;
    return rep;
  }
  rep.colorable = true;
  if (unconditional_plus3(p)) {
    rep.lower = floor_log2(p) + 3;
    rep.tag = BoundTag::plus3_p13_p29;
  } else if (phi_bound_applies(p) && !phi_nt.contains(0)) {
    rep.lower = floor_log2(p) + 3;
    rep.tag = BoundTag::plus3_phi;
  }
  if (auto best = min_colors_over_diagram(topo, space)) {
    rep.upper = best->palette_size;
    rep.witness = best->witness;
  }
  return rep;
}

/// Exhaustive weight checks over every coloring of a diagram: W is a cycle,
/// every crossing weight is independent of the specified corner, and the
/// affine law holds for every (s,t) on every nontrivial coloring.
inline VerificationReport verify_weights(const DiagramTopology& topo, residue p) {
  VerificationReport rep{"weights", p, true, 0, std::nullopt};
  ThetaCocycle theta(p);
  ColoringSpace space = coloring_space(topo, p);
  for_each_coloring(space, [&](const DehnColoring& c) {
    if (!rep.passed)
      return;
    WeightSum w;
    try {
      w = weight_sum(topo, c);
    } catch (const InvariantViolation&) {
      rep.fail("weight sum is not a cycle for a coloring");
      return;
    }
    ++rep.checks;
    for (crossing_id k = 0; k < topo.crossing_count; ++k) {
      WeightTerm ref = crossing_weight(topo, c, k, 0);
      NormalChain2 expect = normalize_gen2(ref.generator, ref.sign, p);
      for (int corner = 1; corner < 4; ++corner) {
        ++rep.checks;
        WeightTerm alt = crossing_weight(topo, c, k, corner);
        if (!(normalize_gen2(alt.generator, alt.sign, p) == expect))
          rep.fail("crossing " + std::to_string(k) + " weight depends on the specified region");
      }
    }
    if (classify_coloring(topo, c) == ColoringClass::nontrivial) {
      const residue base = evaluate(theta, w.chain, p);
      for (residue s = 1; s < p; ++s)
        for (residue t = 0; t < p; ++t) {
          ++rep.checks;
          const residue img = theta_of_weight(theta, topo, apply_affine(c, s, t));
          if (img != mod(s * s % p * base, p))
            rep.fail("affine law fails for s=" + std::to_string(s) + ", t=" + std::to_string(t));
        }
    }
  });
  return rep;
}

} // namespace dehn
