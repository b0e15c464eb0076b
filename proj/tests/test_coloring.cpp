#include <cstdlib>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "dehn/coloring.hpp"
#include "dehn/knot_table.hpp"
#include "dehn/modular.hpp"
#include "oracles.hpp"

using namespace dehn;

namespace {

DiagramTopology topo_of(const std::string& name) { return extract_topology(find_knot(builtin_knot_table(), name).pd); }

std::set<std::vector<residue>> solver_set(const ColoringSpace& space) {
  std::set<std::vector<residue>> out;
  for_each_coloring(space, [&](const DehnColoring& c) { out.insert(c.colors); });
  return out;
}

std::size_t matrix_rank_mod_p(std::vector<std::vector<residue>> m, residue p) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t r = rank;
    while (r < m.size() && m[r][c] % p == 0)
      ++r;
    if (r == m.size())
      continue;
    std::swap(m[r], m[rank]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank)
        continue;
      residue f = mod(m[i][c] * inverse_mod(mod(m[rank][c], p), p), p);
      for (std::size_t j = 0; j < cols; ++j)
        m[i][j] = mod(m[i][j] - f * m[rank][j], p);
    }
    ++rank;
  }
  return rank;
}

} // namespace

TEST(Modular, Basics) {
  EXPECT_EQ(mod(-1, 7), 6);
  EXPECT_EQ(pow_mod(3, 7, 49), 3 * 3 * 3 * 3 * 3 * 3 * 3 % 49);
  EXPECT_TRUE(is_prime(31));
  EXPECT_FALSE(is_prime(9));
  EXPECT_EQ(inverse_mod(3, 7), 5);
  EXPECT_EQ(floor_log2(7), 2);
  EXPECT_EQ(floor_log2(31), 4);
  EXPECT_EQ(floor_log2(8), 3);
  EXPECT_THROW(require_odd_prime(2), InputError);
  EXPECT_THROW(require_odd_prime(9), InputError);
  EXPECT_THROW(require_odd_prime(-7), InputError);
  EXPECT_NO_THROW(require_odd_prime(3));
}

TEST(Constraints, TrefoilMatrix) {
  LinearSystem sys = build_constraints(topo_of("trefoil"), 3);
  ASSERT_EQ(sys.rows.size(), 3u);
  ASSERT_EQ(sys.columns, 5u);
  EXPECT_EQ(matrix_rank_mod_p(sys.rows, 3), 2u);
  for (const auto& row : sys.rows) {
    residue sum = 0;
    for (residue v : row)
      sum += v;
    EXPECT_EQ(mod(sum, 3), 0); // two +1 and two -1
  }
}

TEST(Constraints, KinkRowCancels) {
  DiagramTopology t = extract_topology(parse_pd_code("X(1,2,2,1)"));
  LinearSystem sys = build_constraints(t, 5);
  auto x = crossing_corners(t, 0);
  ASSERT_EQ(x.x1, x.x4);
  EXPECT_EQ(sys.rows[0][static_cast<std::size_t>(x.x1)], 0);
}

TEST(Constraints, UnknotIsUnconstrained) {
  DiagramTopology t = extract_topology(PDCode::unknot());
  ColoringSpace s = coloring_space(t, 7);
  EXPECT_EQ(build_constraints(t, 7).rows.size(), 0u);
  EXPECT_EQ(s.dimension(), 2u);
  EXPECT_EQ(*coloring_count(s), 49u);
  ColoringCounts n = count_colorings(t, s);
  EXPECT_EQ(n.total, 49u);
  EXPECT_EQ(n.nontrivial, 0u);
}

TEST(Solve, KnownCounts) {
  struct Case {
    const char* knot;
    residue p;
    std::size_t dim;
    std::uint64_t nontrivial;
  };
  for (const auto& c : {Case{"trefoil", 3, 3, 18}, Case{"trefoil", 5, 2, 0}, Case{"4_1", 5, 3, 100},
                        Case{"5_1", 5, 3, 100}, Case{"5_2", 7, 3, 294}, Case{"5_2", 5, 2, 0}}) {
    DiagramTopology t = topo_of(c.knot);
    ColoringSpace s = coloring_space(t, c.p);
    EXPECT_EQ(s.dimension(), c.dim) << c.knot << " p=" << c.p;
    ColoringCounts n = count_colorings(t, s);
    EXPECT_EQ(n.total, *coloring_count(s));
    EXPECT_EQ(n.nontrivial, c.nontrivial) << c.knot << " p=" << c.p;
  }
}

TEST(Solve, ConstantAndCheckerboardInSpace) {
  DiagramTopology t = topo_of("5_2");
  ColoringSpace s = coloring_space(t, 7);
  auto all = solver_set(s);
  std::vector<residue> ones(t.region_count, 1), board(t.region_count);
  for (std::size_t r = 0; r < t.region_count; ++r)
    board[r] = t.shading[r] == Shade::black ? 1 : 0;
  EXPECT_TRUE(all.count(ones));
  EXPECT_TRUE(all.count(board));
}

TEST(Enumerate, IndexedAccessMatchesStream) {
  ColoringSpace s = coloring_space(topo_of("5_2"), 7);
  std::uint64_t i = 0;
  for_each_coloring(s, [&](const DehnColoring& c) { EXPECT_EQ(c, coloring_at(s, i++)); });
  EXPECT_EQ(i, 343u);
  // A partial range starting mid-odometer.
  std::vector<DehnColoring> part;
  for_each_coloring(s, 40, 60, [&](const DehnColoring& c) { part.push_back(c); });
  ASSERT_EQ(part.size(), 20u);
  EXPECT_EQ(part.front(), coloring_at(s, 40));
  EXPECT_EQ(part.back(), coloring_at(s, 59));
}

TEST(Enumerate, BudgetRespected) {
  ColoringSpace s = coloring_space(topo_of("5_2"), 7);
  EXPECT_THROW(checked_coloring_count(s, 100), BudgetExceeded);
  EXPECT_EQ(checked_coloring_count(s, 343), 343u);
  ::setenv("DEHN_ENUM_BUDGET", "300", 1);
  EXPECT_EQ(enumeration_budget(), 300u);
  EXPECT_THROW(for_each_coloring(s, [](const DehnColoring&) {}), BudgetExceeded);
  ::setenv("DEHN_ENUM_BUDGET", "junk", 1);
  EXPECT_EQ(enumeration_budget(), default_enumeration_budget);
  ::unsetenv("DEHN_ENUM_BUDGET");
}

TEST(Classify, TrivialExamples) {
  DiagramTopology t = topo_of("5_2");
  DehnColoring mono{7, std::vector<residue>(t.region_count, 4)};
  EXPECT_EQ(classify_coloring(t, mono), ColoringClass::trivial);
  DehnColoring board{7, {}};
  for (auto s : t.shading)
    board.colors.push_back(s == Shade::black ? 0 : 1);
  EXPECT_EQ(classify_coloring(t, board), ColoringClass::trivial);
}

TEST(Classify, FiveColorsMeansNontrivial) {
  DiagramTopology t = topo_of("5_2");
  std::size_t seen = 0;
  for_each_coloring(coloring_space(t, 7), [&](const DehnColoring& c) {
    if (palette_of(c).size() >= 3) {
      ++seen;
      EXPECT_EQ(classify_coloring(t, c), ColoringClass::nontrivial);
    }
    if (classify_coloring(t, c) == ColoringClass::trivial) {
      EXPECT_LE(palette_of(c).size(), 2u);
    }
  });
  EXPECT_EQ(seen, 294u);
}

TEST(Affine, Basics) {
  DiagramTopology t = topo_of("trefoil");
  ColoringSpace s = coloring_space(t, 3);
  DehnColoring c = coloring_at(s, 5);
  EXPECT_EQ(apply_affine(c, 1, 0), c);
  EXPECT_THROW(apply_affine(c, 3, 1), InputError);
  EXPECT_THROW(apply_affine(c, 0, 1), InputError);
  DehnColoring mono{7, {2, 2, 2}};
  EXPECT_EQ(apply_affine(mono, 3, 5).colors, (std::vector<residue>{4, 4, 4}));
}

TEST(Affine, PaletteTransforms) {
  DiagramTopology t = topo_of("5_2");
  ColoringSpace s = coloring_space(t, 7);
  for_each_coloring(s, [&](const DehnColoring& c) {
    for (residue a = 1; a < 7; ++a) {
      DehnColoring img = apply_affine(c, a, 3);
      EXPECT_TRUE(is_valid_coloring(t, img));
      EXPECT_EQ(classify_coloring(t, img), classify_coloring(t, c));
      std::set<residue> expect;
      for (residue x : palette_of(c).elements)
        expect.insert(mod(a * x + 3, 7));
      EXPECT_EQ(palette_of(img).elements, std::vector<residue>(expect.begin(), expect.end()));
    }
  });
}

TEST(Affine, ClassesTrefoil) {
  DiagramTopology t = topo_of("trefoil");
  auto classes = coloring_affine_classes(t, coloring_space(t, 3));
  ASSERT_EQ(classes.size(), 3u);
  for (const auto& c : classes) {
    EXPECT_EQ(c.members.size(), 6u);
    EXPECT_EQ(c.stabilizer_order, 1u);
    EXPECT_EQ(affine_canonical_coloring(c.representative), c.representative);
  }
}

TEST(Affine, ClassesMatchOrbitOracle) {
  for (auto [name, p] : {std::pair{"5_2", 7}, std::pair{"trefoil", 3}, std::pair{"4_1", 5}, std::pair{"5_1", 5}}) {
    DiagramTopology t = topo_of(name);
    auto classes = coloring_affine_classes(t, coloring_space(t, p));
    std::set<std::vector<residue>> nontrivial;
    for (const auto& c : oracle::brute_force_colorings(t, p))
      if (!oracle::brute_force_trivial(t, c))
        nontrivial.insert(c);
    auto orbits = oracle::affine_orbits_bfs(nontrivial, p);
    ASSERT_EQ(classes.size(), orbits.size()) << name;
    for (const auto& c : classes) {
      ASSERT_TRUE(orbits.count(c.representative.colors)) << name;
      EXPECT_EQ(orbits.at(c.representative.colors), c.members.size());
      EXPECT_EQ(c.members.size() * c.stabilizer_order, static_cast<std::size_t>(p * (p - 1)));
      for (const auto& m : c.members)
        EXPECT_EQ(palette_of(m).size(), palette_of(c.representative).size());
    }
  }
  DiagramTopology t = topo_of("5_2");
  auto classes = coloring_affine_classes(t, coloring_space(t, 7));
  EXPECT_EQ(classes.size(), 7u);
  for (const auto& c : classes)
    EXPECT_EQ(c.members.size(), 42u);
}

TEST(MinColors, Examples) {
  DiagramTopology t = topo_of("trefoil");
  auto m = min_colors_over_diagram(t, coloring_space(t, 3));
  ASSERT_TRUE(m);
  EXPECT_EQ(m->palette_size, 3u);
  EXPECT_EQ(classify_coloring(t, m->witness), ColoringClass::nontrivial);

  DiagramTopology k = topo_of("5_2");
  auto m7 = min_colors_over_diagram(k, coloring_space(k, 7));
  ASSERT_TRUE(m7);
  EXPECT_EQ(m7->palette_size, 5u);
  EXPECT_EQ(palette_of(m7->witness).size(), 5u);

  DiagramTopology u = topo_of("unknot");
  EXPECT_FALSE(min_colors_over_diagram(u, coloring_space(u, 7)));
}

// Solver against brute force on every small diagram in a fixed-seed family.
TEST(ColoringProperty, SolverMatchesBruteForce) {
  std::vector<PDCode> diagrams;
  for (const auto& e : builtin_knot_table())
    diagrams.push_back(e.pd);
  diagrams.push_back(parse_pd_code("X(1,2,2,1)"));
  std::mt19937 rng(7);
  for (int k = 0; k < 40; ++k) {
    const int strands = 2 + k % 3;
    auto w = oracle::random_knot_braid(rng, strands, strands - 1 + static_cast<int>(rng() % (7 - strands)));
    diagrams.push_back(oracle::braid_closure(w, strands));
  }
  for (const auto& pd : diagrams) {
    DiagramTopology t = extract_topology(pd);
    if (t.region_count > 7)
      continue;
    for (residue p : {3, 5, 7}) {
      ColoringSpace s = coloring_space(t, p);
      auto brute = oracle::brute_force_colorings(t, p);
      ASSERT_EQ(solver_set(s), brute) << to_string(pd) << " p=" << p;
      std::size_t trivial = 0;
      for (const auto& c : brute)
        trivial += oracle::brute_force_trivial(t, c);
      EXPECT_EQ(trivial, static_cast<std::size_t>(p * p));
      EXPECT_EQ(count_colorings(t, s).nontrivial, brute.size() - trivial);
    }
  }
}

TEST(ColoringProperty, LogBoundObserved) {
  std::mt19937 rng(11);
  std::vector<PDCode> diagrams;
  for (const auto& e : builtin_knot_table())
    diagrams.push_back(e.pd);
  for (int k = 0; k < 30; ++k)
    diagrams.push_back(oracle::braid_closure(oracle::random_knot_braid(rng, 3, 4 + k % 5), 3));
  for (const auto& pd : diagrams) {
    DiagramTopology t = extract_topology(pd);
    for (residue p : {7, 11, 13}) {
      ColoringSpace s = coloring_space(t, p);
      if (!coloring_count(s, 2'000'000))
        continue;
      for_each_coloring(s, [&](const DehnColoring& c) {
        if (classify_coloring(t, c) == ColoringClass::nontrivial) {
          EXPECT_GE(palette_of(c).size(), static_cast<std::size_t>(floor_log2(p) + 2));
        }
      });
    }
  }
}
