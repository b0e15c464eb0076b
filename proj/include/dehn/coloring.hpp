#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dehn/errors.hpp"
#include "dehn/modular.hpp"
#include "dehn/topology.hpp"

namespace dehn {

/// Homogeneous linear system over Z_p: one row per crossing, one column per region.
struct LinearSystem {
  residue p = 0;
  std::size_t columns = 0;
  std::vector<std::vector<residue>> rows;
};

/// Solution space of a LinearSystem: a basis in reduced echelon form.
struct ColoringSpace {
  residue p = 0;
  std::size_t region_count = 0;
  std::vector<std::vector<residue>> basis;
  std::size_t rank = 0;

  std::size_t dimension() const noexcept { return basis.size(); }
};

/// A map region -> Z_p, indexed by region id.
struct DehnColoring {
  residue p = 0;
  std::vector<residue> colors;

  friend bool operator==(const DehnColoring&, const DehnColoring&) = default;
  friend auto operator<=>(const DehnColoring&, const DehnColoring&) = default;
};

/// Sorted set of canonical residues used by a coloring.
struct ColorPalette {
  residue p = 0;
  std::vector<residue> elements;

  std::size_t size() const noexcept { return elements.size(); }
  friend bool operator==(const ColorPalette&, const ColorPalette&) = default;
};

enum class ColoringClass { trivial, nontrivial };

inline constexpr std::uint64_t default_enumeration_budget = 100'000'000ULL;

/// Enumeration cap; the DEHN_ENUM_BUDGET environment variable overrides it.
inline std::uint64_t enumeration_budget() {
  if (const char* env = std::getenv("DEHN_ENUM_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return v;
  }
  return default_enumeration_budget;
}

inline LinearSystem build_constraints(const DiagramTopology& topo, residue p) {
  require_odd_prime(p);
  LinearSystem sys{p, topo.region_count, {}};
  for (crossing_id k = 0; k < topo.crossing_count; ++k) {
    CrossingCorners x = crossing_corners(topo, k);
    std::vector<residue> row(topo.region_count, 0);
    auto add = [&](region_id r, residue v) {
      auto& cell = row[static_cast<std::size_t>(r)];
      cell = mod(cell + v, p);
    };
    add(x.x1, 1);
    add(x.x3, 1);
    add(x.x2, -1);
    add(x.x4, -1);
    sys.rows.push_back(std::move(row));
  }
  return sys;
}

/// Gaussian elimination over Z_p, pivoting on the first nonzero column.
/// Basis vector i has a 1 in the i-th free column and 0 in the other free columns.
inline ColoringSpace solve_coloring_space(const LinearSystem& sys) {
  const residue p = sys.p;
  auto m = sys.rows;
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < sys.columns && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0)
      ++sel;
    if (sel == m.size())
      continue;
    std::swap(m[row], m[sel]);
    residue inv = inverse_mod(m[row][col], p);
    for (auto& v : m[row])
      v = (v * inv) % p;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0)
        continue;
      residue f = m[r][col];
      for (std::size_t c = 0; c < sys.columns; ++c)
        m[r][c] = mod(m[r][c] - f * m[row][c], p);
    }
    pivot_cols.push_back(col);
    ++row;
  }

  ColoringSpace space{p, sys.columns, {}, pivot_cols.size()};
  std::vector<bool> is_pivot(sys.columns, false);
  for (auto c : pivot_cols)
    is_pivot[c] = true;
  for (std::size_t f = 0; f < sys.columns; ++f) {
    if (is_pivot[f])
      continue;
    std::vector<residue> v(sys.columns, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r)
      v[pivot_cols[r]] = mod(-m[r][f], p);
    space.basis.push_back(std::move(v));
  }
  return space;
}

inline ColoringSpace coloring_space(const DiagramTopology& topo, residue p) {
  return solve_coloring_space(build_constraints(topo, p));
}

/// p^d, or nullopt when it exceeds `cap`.
inline std::optional<std::uint64_t> coloring_count(const ColoringSpace& space, std::uint64_t cap = UINT64_MAX) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    if (n > cap / static_cast<std::uint64_t>(space.p))
      return std::nullopt;
    n *= static_cast<std::uint64_t>(space.p);
  }
  return n;
}

/// Number of colorings, throwing BudgetExceeded when above the budget.
inline std::uint64_t checked_coloring_count(const ColoringSpace& space, std::uint64_t budget = enumeration_budget()) {
  auto n = coloring_count(space, budget);
  if (!n)
    throw BudgetExceeded("coloring space p^" + std::to_string(space.dimension()) + " (p=" +
                         std::to_string(space.p) + ") exceeds enumeration budget " + std::to_string(budget));
  return *n;
}

/// The coloring with coefficient digits of `index` in base p; the first basis
/// vector carries the most significant digit.
inline DehnColoring coloring_at(const ColoringSpace& space, std::uint64_t index) {
  DehnColoring c{space.p, std::vector<residue>(space.region_count, 0)};
  const auto p = static_cast<std::uint64_t>(space.p);
  for (std::size_t i = space.dimension(); i-- > 0;) {
    auto coef = static_cast<residue>(index % p);
    index /= p;
    if (coef == 0)
      continue;
    for (std::size_t r = 0; r < space.region_count; ++r)
      c.colors[r] = (c.colors[r] + coef * space.basis[i][r]) % space.p;
  }
  return c;
}

/// Streams colorings with indices in [first, last) to `fn` without materializing them.
template <typename Fn>
void for_each_coloring(const ColoringSpace& space, std::uint64_t first, std::uint64_t last, Fn&& fn) {
  if (first >= last)
    return;
  const std::size_t d = space.dimension();
  const residue p = space.p;
  DehnColoring current = coloring_at(space, first);
  std::vector<residue> digits(d, 0);
  std::uint64_t rem = first;
  for (std::size_t i = d; i-- > 0;) {
    digits[i] = static_cast<residue>(rem % static_cast<std::uint64_t>(p));
    rem /= static_cast<std::uint64_t>(p);
  }
  for (std::uint64_t idx = first;;) {
    fn(static_cast<const DehnColoring&>(current));
    if (++idx == last)
      break;
    // Odometer step on the least significant digit, updating colors incrementally.
    for (std::size_t i = d; i-- > 0;) {
      const auto& b = space.basis[i];
      if (digits[i] + 1 < p) {
        ++digits[i];
        for (std::size_t r = 0; r < space.region_count; ++r)
          current.colors[r] = (current.colors[r] + b[r]) % p;
        break;
      }
      digits[i] = 0;
      for (std::size_t r = 0; r < space.region_count; ++r)
        current.colors[r] = mod(current.colors[r] - (p - 1) * b[r], p);
    }
  }
}

/// Streams every coloring in index order; throws BudgetExceeded first if too many.
template <typename Fn>
void for_each_coloring(const ColoringSpace& space, Fn&& fn) {
  for_each_coloring(space, 0, checked_coloring_count(space), std::forward<Fn>(fn));
}

inline bool is_valid_coloring(const DiagramTopology& topo, const DehnColoring& c) {
  if (c.colors.size() != topo.region_count)
    return false;
  for (residue v : c.colors)
    if (v < 0 || v >= c.p)
      return false;
  for (crossing_id k = 0; k < topo.crossing_count; ++k) {
    CrossingCorners x = crossing_corners(topo, k);
    auto col = [&](region_id r) { return c.colors[static_cast<std::size_t>(r)]; };
    if (mod(col(x.x1) + col(x.x3) - col(x.x2) - col(x.x4), c.p) != 0)
      return false;
  }
  return true;
}

/// Trivial iff every crossing has C(x1)=C(x4) and C(x2)=C(x3). This is
/// cross-checked against "constant on each checkerboard shade class".
inline ColoringClass classify_coloring(const DiagramTopology& topo, const DehnColoring& c) {
  bool crosswise = true;
  for (crossing_id k = 0; k < topo.crossing_count && crosswise; ++k) {
    CrossingCorners x = crossing_corners(topo, k);
    auto col = [&](region_id r) { return c.colors[static_cast<std::size_t>(r)]; };
    crosswise = col(x.x1) == col(x.x4) && col(x.x2) == col(x.x3);
  }

  std::optional<residue> black, white;
  bool by_shade = true;
  for (std::size_t r = 0; r < topo.region_count && by_shade; ++r) {
    auto& slot = topo.shading[r] == Shade::black ? black : white;
    if (!slot)
      slot = c.colors[r];
    else
      by_shade = *slot == c.colors[r];
  }

  if (crosswise != by_shade)
    throw InvariantViolation("crossing-wise and checkerboard triviality tests disagree");
  return crosswise ? ColoringClass::trivial : ColoringClass::nontrivial;
}

inline DehnColoring apply_affine(const DehnColoring& c, residue s, residue t) {
  if (mod(s, c.p) == 0)
    throw InputError("affine scale s must be a unit mod p");
  DehnColoring out{c.p, c.colors};
  for (auto& v : out.colors)
    v = mod(s * v + t, c.p);
  return out;
}

inline ColorPalette palette_of(const DehnColoring& c) {
  std::set<residue> used(c.colors.begin(), c.colors.end());
  return {c.p, {used.begin(), used.end()}};
}

/// Totals over the whole coloring space.
struct ColoringCounts {
  std::uint64_t total = 0;
  std::uint64_t nontrivial = 0;
};

inline ColoringCounts count_colorings(const DiagramTopology& topo, const ColoringSpace& space) {
  ColoringCounts n;
  for_each_coloring(space, [&](const DehnColoring& c) {
    ++n.total;
    if (classify_coloring(topo, c) == ColoringClass::nontrivial)
      ++n.nontrivial;
  });
  return n;
}

/// An orbit of nontrivial colorings under C -> sC+t.
struct AffineClass {
  DehnColoring representative; ///< lexicographically least member
  std::vector<DehnColoring> members;
  std::size_t stabilizer_order = 1;
};

/// Lexicographically least coloring among all sC+t.
inline DehnColoring affine_canonical_coloring(const DehnColoring& c) {
  DehnColoring best = c;
  for (residue s = 1; s < c.p; ++s)
    for (residue t = 0; t < c.p; ++t) {
      DehnColoring img = apply_affine(c, s, t);
      if (img.colors < best.colors)
        best = std::move(img);
    }
  return best;
}

inline std::vector<AffineClass> coloring_affine_classes(const DiagramTopology& topo, const ColoringSpace& space) {
  std::map<std::vector<residue>, AffineClass> by_rep;
  for_each_coloring(space, [&](const DehnColoring& c) {
    if (classify_coloring(topo, c) == ColoringClass::trivial)
      return;
    DehnColoring rep = affine_canonical_coloring(c);
    auto& cls = by_rep[rep.colors];
    cls.representative = rep;
    cls.members.push_back(c);
  });
  std::vector<AffineClass> out;
  const auto group_order = static_cast<std::size_t>(space.p * (space.p - 1));
  for (auto& [key, cls] : by_rep) {
    cls.stabilizer_order = group_order / cls.members.size();
    out.push_back(std::move(cls));
  }
  return out;
}

struct MinColors {
  std::size_t palette_size = 0;
  DehnColoring witness;
};

/// Smallest palette among nontrivial colorings of this diagram (the first
/// such coloring in enumeration order is the witness), or nullopt when the
/// diagram has no nontrivial coloring.
inline std::optional<MinColors> min_colors_over_diagram(const DiagramTopology& topo, const ColoringSpace& space) {
  std::optional<MinColors> best;
  for_each_coloring(space, [&](const DehnColoring& c) {
    if (classify_coloring(topo, c) == ColoringClass::trivial)
      return;
    std::size_t n = palette_of(c).size();
    if (!best || n < best->palette_size)
      best = MinColors{n, c};
  });
  return best;
}

} // namespace dehn
