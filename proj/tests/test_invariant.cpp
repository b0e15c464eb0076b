#include <random>

#include <gtest/gtest.h>

#include "dehn/invariant.hpp"
#include "dehn/knot_table.hpp"
#include "oracles.hpp"

using namespace dehn;

namespace {

DiagramTopology topo_of(const std::string& name) { return extract_topology(find_knot(builtin_knot_table(), name).pd); }

PhiMultiset phi_of(const DiagramTopology& t, residue p, PhiFlavor f = PhiFlavor::nontrivial, unsigned threads = 1) {
  return phi_invariant(t, coloring_space(t, p), ThetaCocycle(p), f, threads);
}

PhiMultiset phi_of_braid(const std::vector<int>& w, int strands, residue p) {
  return phi_of(extract_topology(oracle::braid_closure(w, strands)), p);
}

PhiMultiset negated(const PhiMultiset& m) {
  PhiMultiset out{m.p, m.flavor, {}};
  for (const auto& [v, k] : m.counts)
    out.counts[mod(-v, m.p)] += k;
  return out;
}

using Counts = std::map<residue, std::uint64_t>;

} // namespace

TEST(Weights, CrossingWeightArguments) {
  DiagramTopology t = topo_of("trefoil");
  ColoringSpace s = coloring_space(t, 3);
  DehnColoring c = coloring_at(s, 5);
  EXPECT_THROW(crossing_weight(t, c, 3), InputError);
  EXPECT_THROW(crossing_weight(t, c, 0, 4), std::invalid_argument);
  WeightTerm w = crossing_weight(t, c, 1);
  EXPECT_EQ(w.crossing, 1u);
  EXPECT_EQ(w.sign, 1);
  EXPECT_EQ(crossing_weight(t, c, 1, 1).sign, -1);
  // The generator read from corner 0 is (x1, under neighbour, over neighbour).
  auto x = crossing_corners(t, 1);
  EXPECT_EQ(w.generator.a, c.colors[static_cast<std::size_t>(x.x1)]);
  EXPECT_EQ(w.generator.b, c.colors[static_cast<std::size_t>(x.x2)]);
  EXPECT_EQ(w.generator.c, c.colors[static_cast<std::size_t>(x.x3)]);
}

TEST(Weights, SuitePassesOnBuiltinKnots) {
  for (const auto& e : builtin_knot_table()) {
    DiagramTopology t = extract_topology(e.pd);
    for (residue p : {3, 5, 7}) {
      VerificationReport r = verify_weights(t, p);
      EXPECT_TRUE(r.passed) << e.name << " p=" << p << ": " << r.counterexample.value_or("");
    }
  }
}

TEST(Weights, TrivialColoringsHaveZeroTheta) {
  for (const char* name : {"trefoil", "4_1", "5_2"}) {
    DiagramTopology t = topo_of(name);
    for (residue p : {5, 7}) {
      ThetaCocycle theta(p);
      for_each_coloring(coloring_space(t, p), [&](const DehnColoring& c) {
        if (classify_coloring(t, c) == ColoringClass::trivial) {
          EXPECT_EQ(theta_of_weight(theta, t, c), 0);
        }
      });
    }
  }
}

TEST(Phi, KnownValues) {
  EXPECT_EQ(phi_of(topo_of("trefoil"), 3).counts, (Counts{{1, 18}}));
  EXPECT_EQ(phi_of(topo_of("4_1"), 5).counts, (Counts{{2, 50}, {3, 50}}));
  EXPECT_EQ(phi_of(topo_of("5_1"), 5).counts, (Counts{{1, 50}, {4, 50}}));
  EXPECT_EQ(phi_of(topo_of("5_2"), 7).counts, (Counts{{3, 98}, {5, 98}, {6, 98}}));
  EXPECT_TRUE(phi_of(topo_of("trefoil"), 5).counts.empty());
}

TEST(Phi, AllFlavorAddsZerosForTrivialColorings) {
  for (const char* name : {"trefoil", "4_1", "5_2"})
    for (residue p : {3, 5, 7}) {
      DiagramTopology t = topo_of(name);
      PhiMultiset all = phi_of(t, p, PhiFlavor::all), nt = phi_of(t, p);
      EXPECT_EQ(all.flavor, PhiFlavor::all);
      EXPECT_EQ(all.total(), checked_coloring_count(coloring_space(t, p)));
      nt.counts[0] += static_cast<std::uint64_t>(p * p);
      EXPECT_EQ(all.counts, nt.counts) << name << " " << p;
    }
}

TEST(Phi, ThreadedMatchesSequential) {
  DiagramTopology t = topo_of("5_2");
  for (unsigned threads : {2u, 3u, 8u})
    EXPECT_EQ(phi_of(t, 7, PhiFlavor::nontrivial, threads), phi_of(t, 7));
  EXPECT_EQ(phi_of(t, 7, PhiFlavor::all, 4), phi_of(t, 7, PhiFlavor::all));
}

TEST(Phi, MirrorNegatesValues) {
  EXPECT_EQ(phi_of_braid({-1, -1, -1, -2, 1, -2}, 3, 7), negated(phi_of_braid({1, 1, 1, 2, -1, 2}, 3, 7)));
  EXPECT_EQ(phi_of_braid({-1, -1, -1}, 2, 3), negated(phi_of(topo_of("trefoil"), 3)));
}

// Braid closures of the same knot give equal Phi.
TEST(PhiProperty, InvariantUnderMarkovMovesAndMirrorNegates) {
  std::mt19937 rng(424242);
  for (int trial = 0; trial < 25; ++trial) {
    const int strands = 2 + trial % 3;
    auto w = oracle::random_knot_braid(rng, strands, 3 + static_cast<int>(rng() % 4));
    for (residue p : {3, 5, 7}) {
      PhiMultiset base = phi_of_braid(w, strands, p);
      // Conjugation: rotate the word.
      std::vector<int> rot(w.begin() + 1, w.end());
      rot.push_back(w.front());
      EXPECT_EQ(phi_of_braid(rot, strands, p), base);
      // Stabilization with either sign.
      for (int sgn : {1, -1}) {
        auto st = w;
        st.push_back(sgn * strands);
        EXPECT_EQ(phi_of_braid(st, strands + 1, p), base);
      }
      EXPECT_EQ(phi_of_braid(oracle::mirror_word(w), strands, p), negated(base));
    }
  }
}

TEST(PhiProperty, BraidRelationPreservesPhi) {
  // s1 s2 s1 = s2 s1 s2 inserted into a 3-strand knot word.
  const std::vector<int> left{1, 2, 1, -2}, right{2, 1, 2, -2};
  for (residue p : {3, 5, 7})
    EXPECT_EQ(phi_of_braid(left, 3, p), phi_of_braid(right, 3, p));
}

TEST(PhiProperty, AffineLawOnRandomColorings) {
  std::mt19937 rng(99);
  DiagramTopology t = topo_of("5_2");
  ColoringSpace s = coloring_space(t, 7);
  ThetaCocycle theta(7);
  std::uniform_int_distribution<std::uint64_t> pick(0, 342);
  std::uniform_int_distribution<residue> u(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    DehnColoring c = coloring_at(s, pick(rng));
    residue sc = 1 + u(rng) % 6;
    EXPECT_TRUE(affine_law_check(t, theta, c, sc, u(rng)));
  }
}

TEST(Bounds, FiveTwoAtSeven) {
  DiagramTopology t = topo_of("5_2");
  ColoringSpace s = coloring_space(t, 7);
  BoundReport b = mincol_bounds(t, s, phi_of(t, 7));
  EXPECT_TRUE(b.colorable);
  EXPECT_EQ(b.lower, 5);
  EXPECT_EQ(b.tag, BoundTag::plus3_phi);
  ASSERT_TRUE(b.upper.has_value());
  EXPECT_EQ(*b.upper, 5u);
  ASSERT_TRUE(b.witness.has_value());
  EXPECT_EQ(palette_of(*b.witness).size(), 5u);
  EXPECT_EQ(classify_coloring(t, *b.witness), ColoringClass::nontrivial);
}

TEST(Bounds, LogBoundAndNonColorable) {
  DiagramTopology t = topo_of("trefoil");
  BoundReport b = mincol_bounds(t, coloring_space(t, 3), phi_of(t, 3));
  EXPECT_EQ(b.lower, 3);
  EXPECT_EQ(b.tag, BoundTag::log_bound);
  EXPECT_EQ(b.upper, std::optional<std::size_t>(3));

  BoundReport n = mincol_bounds(t, coloring_space(t, 5), phi_of(t, 5));
  EXPECT_FALSE(n.colorable);
  EXPECT_FALSE(n.upper.has_value());
  EXPECT_NE(n.note.find("not Dehn 5-colorable"), std::string::npos);

  EXPECT_THROW(mincol_bounds(t, coloring_space(t, 3), phi_of(t, 3, PhiFlavor::all)), std::invalid_argument);
}

TEST(Bounds, TagSelection) {
  EXPECT_EQ(to_string(BoundTag::log_bound), "log-bound");
  EXPECT_EQ(to_string(BoundTag::plus3_p13_p29), "plus3-p13-29");
  EXPECT_EQ(to_string(BoundTag::plus3_phi), "plus3-phi");
  EXPECT_TRUE(unconditional_plus3(13));
  EXPECT_TRUE(unconditional_plus3(29));
  EXPECT_FALSE(unconditional_plus3(17));
  for (residue p : {7, 11, 19, 23, 31})
    EXPECT_TRUE(phi_bound_applies(p));
  for (residue p : {3, 5, 13, 17, 29, 37})
    EXPECT_FALSE(phi_bound_applies(p));

  // A Phi multiset containing 0 keeps the log bound at p = 7.
  DiagramTopology t = topo_of("5_2");
  ColoringSpace s = coloring_space(t, 7);
  PhiMultiset with_zero{7, PhiFlavor::nontrivial, {{0, 3}, {5, 1}}};
  BoundReport b = mincol_bounds(t, s, with_zero);
  EXPECT_EQ(b.tag, BoundTag::log_bound);
  EXPECT_EQ(b.lower, 4);
}

TEST(Bounds, UnconditionalAtThirteen) {
  // 13 divides the determinant of this closure.
  std::mt19937 rng(1300);
  bool found = false;
  for (int trial = 0; trial < 400 && !found; ++trial) {
    auto w = oracle::random_knot_braid(rng, 3, 4 + static_cast<int>(rng() % 4));
    DiagramTopology t = extract_topology(oracle::braid_closure(w, 3));
    if (knot_determinant(t) % 13 != 0)
      continue;
    found = true;
    ColoringSpace s = coloring_space(t, 13);
    BoundReport b = mincol_bounds(t, s, phi_of(t, 13));
    EXPECT_TRUE(b.colorable);
    EXPECT_EQ(b.tag, BoundTag::plus3_p13_p29);
    EXPECT_EQ(b.lower, 6);
    ASSERT_TRUE(b.upper.has_value());
    EXPECT_GE(static_cast<int>(*b.upper), b.lower);
  }
  EXPECT_TRUE(found);
}
