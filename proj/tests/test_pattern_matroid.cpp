#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace ctrlsparse;
using namespace fixtures;

namespace {

SparsityPattern random_pattern(std::mt19937_64& rng, int n, int l, double dens) {
  std::bernoulli_distribution b(dens);
  SparsityPattern p(n, l);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < l; ++c)
      if (b(rng)) p.insert(r, c);
  return p;
}

}  // namespace

TEST(Pattern, BasicAccessors) {
  SparsityPattern p = six_state_two_input_pattern();
  EXPECT_EQ(p.n(), 6);
  EXPECT_EQ(p.l(), 2);
  EXPECT_EQ(p.nnz(), 4u);
  EXPECT_TRUE(p.contains(1, 1));
  EXPECT_FALSE(p.contains(0, 1));
  EXPECT_EQ(p.active_rows(), (std::vector<int>{0, 1, 2}));
  EXPECT_FALSE(p.insert(0, 0));
  EXPECT_THROW(p.insert(6, 0), DimensionError);
  EXPECT_THROW(p.insert(0, 2), DimensionError);
  const auto rows = p.row_adjacency();
  EXPECT_EQ(rows[1], (std::vector<int>{0, 1}));
  EXPECT_TRUE(rows[5].empty());
}

TEST(Pattern, InstantiateAndRoundTrip) {
  const SparsityPattern p = six_state_two_input_pattern();
  const Eigen::MatrixXd b = p.instantiate(1.0);
  EXPECT_EQ(b.sum(), 4.0);
  EXPECT_TRUE(SparsityPattern::of_matrix(b) == p);
  const auto d = SparsityPattern::diagonal(4, {0, 2});
  EXPECT_EQ(d.l(), 4);
  EXPECT_TRUE(d.contains(2, 2));
  EXPECT_EQ(d.nnz(), 2u);
}

TEST(Pattern, UnionRequiresEqualShapes) {
  SparsityPattern a(3, 2, {{0, 0}});
  SparsityPattern b(3, 2, {{1, 1}, {0, 0}});
  EXPECT_EQ(pattern_union({a, b}).nnz(), 2u);
  EXPECT_THROW(pattern_union({a, SparsityPattern(3, 3)}), DimensionError);
}

TEST(GenericRank, KnownValues) {
  const auto p = six_state_two_input_pattern();
  EXPECT_EQ(pattern_generic_rank(p, {0, 1}, {0, 1}), 2);
  EXPECT_EQ(pattern_generic_rank(p, {0}, {0, 1}), 1);
  EXPECT_EQ(pattern_generic_rank(p, {3, 4}, {0, 1}), 0);
  EXPECT_EQ(pattern_generic_rank(p), 2);
  EXPECT_EQ(pattern_generic_rank(SparsityPattern(3, 3)), 0);
}

TEST(GenericRank, EqualsRandomInstantiationRank) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + static_cast<int>(rng() % 7);
    const int l = 1 + static_cast<int>(rng() % 5);
    const auto p = random_pattern(rng, n, l, 0.3);
    EXPECT_EQ(pattern_generic_rank(p), random_generic_rank(p, rng)) << t;
  }
}

TEST(Matching, HopcroftKarpMatchesDfsOracle) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const int left = static_cast<int>(rng() % 9);
    const int right = 1 + static_cast<int>(rng() % 8);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(left));
    for (auto& a : adj)
      for (int r = 0; r < right; ++r)
        if (rng() % 3 == 0) a.push_back(r);
    const auto m = hopcroft_karp(adj, right);
    EXPECT_EQ(m.size, dfs_matching(adj, right));
    int count = 0;
    for (std::size_t u = 0; u < adj.size(); ++u) {
      const int v = m.mate_left[u];
      if (v < 0) continue;
      ++count;
      EXPECT_EQ(m.mate_right[static_cast<std::size_t>(v)], static_cast<int>(u));
      EXPECT_NE(std::find(adj[u].begin(), adj[u].end(), v), adj[u].end());
    }
    EXPECT_EQ(count, m.size);
  }
}

TEST(IsmDigraph, TwoInputPatternOfSixStateSystem) {
  const auto es = six_state_printed();
  const auto g = build_ism(es, six_state_two_input_pattern());
  // u1 -> 1, 2 and u2 -> 2, 3.
  EXPECT_EQ(g.edges_us.size(), 4u);
  // Nonzeros of the printed X^T: mode 1 has 3, mode 2 has 4, mode 3 has 3.
  EXPECT_EQ(g.edges_sm.size(), 10u);
  EXPECT_EQ(g.mode_vertices.size(), 6u);
  EXPECT_EQ(g.arc_count(), 14u);
  const std::string dot = g.to_dot();
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("u1"), std::string::npos);
}

TEST(IsmDigraph, ComputedBasisGivesNoRoundoffArcs) {
  const auto es = compute_eigenstructure(six_state_a(), {});
  const auto g = build_ism(es, six_state_two_input_pattern());
  // States 5, 6 only touch mode 2 and 3 respectively in any basis; the
  // orthonormal bases must not add arcs from exact zero columns.
  for (const auto& [s, mv] : g.edges_sm) {
    const int mode = g.mode_vertices[static_cast<std::size_t>(mv)].first;
    EXPECT_GT(oracle_restricted_rank(es, mode, {s}), 0);
  }
}

TEST(Matroid, LinearAndTransversalIndependence) {
  const auto es = six_state_printed();
  const auto m1 = LinearMatroid::of_mode(es, 0);
  EXPECT_TRUE(m1.independent({0, 1}));
  EXPECT_FALSE(m1.independent({0, 3, 1}));
  EXPECT_TRUE(m1.is_loop(2));
  EXPECT_EQ(m1.rank({0, 1, 3}), 2);
  const TransversalMatroid m2(six_state_two_input_pattern());
  EXPECT_TRUE(m2.independent({0, 2}));
  EXPECT_FALSE(m2.independent({0, 1, 2}));
  EXPECT_TRUE(m2.is_loop(4));
}

TEST(Matroid, WitnessForFirstModeOfSixStateSystem) {
  const auto es = six_state_printed();
  const auto [ok, w] = independently_matched(es, 0, six_state_two_input_pattern());
  EXPECT_TRUE(ok);
  EXPECT_EQ(w.size, 2);
  EXPECT_EQ(w.h, (std::vector<int>{0, 1}));
  EXPECT_EQ(w.phi, (std::vector<int>{0, 1}));
  ASSERT_EQ(w.matching.size(), 2u);
  EXPECT_EQ(w.matching[0], (std::pair<int, int>{0, 0}));
  EXPECT_EQ(w.matching[1], (std::pair<int, int>{1, 1}));
}

TEST(Matroid, WitnessIsCommonIndependent) {
  const auto es = six_state_printed();
  const auto p = six_state_two_input_pattern();
  for (int i = 0; i < 3; ++i) {
    const auto [ok, w] = independently_matched(es, i, p);
    EXPECT_TRUE(ok) << i;
    EXPECT_TRUE(is_h_set(es, i, w.h));
    for (const auto& [s, u] : w.matching) EXPECT_TRUE(p.contains(s, u));
  }
}

TEST(Matroid, IntersectionEqualsExhaustiveSearch) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 150; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    const auto es = compute_eigenstructure(
        gen_jordan(n, std::min(3, n), 0.15 + 0.1 * static_cast<double>(seed % 5), seed), {});
    const int l = 1 + static_cast<int>(rng() % 3);
    const auto p = random_pattern(rng, n, l, 0.35);
    for (int i = 0; i < es.p(); ++i) {
      const auto w = matroid_intersection(LinearMatroid::of_mode(es, i),
                                          TransversalMatroid(p));
      EXPECT_EQ(w.size, exhaustive_intersection(es, i, p)) << "seed " << seed;
      ++checked;
    }
  }
}

TEST(Matroid, SparseBasesIntersectionEqualsExhaustiveSearch) {
  // Hand-built sparse bases exercise the loop and exchange logic harder
  // than the dense bases of the random generator.
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % 3);
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, k);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < k; ++c)
        if (rng() % 3 == 0) x(r, c) = static_cast<double>(1 + rng() % 3);
    if (lu_rank(x) < k) continue;
    const auto es = eigenstructure_from_bases(n, {1.0}, {x});
    const auto p = random_pattern(rng, n, 1 + static_cast<int>(rng() % 3), 0.4);
    const auto w = matroid_intersection(LinearMatroid::of_mode(es, 0),
                                        TransversalMatroid(p));
    EXPECT_EQ(w.size, exhaustive_intersection(es, 0, p)) << t;
  }
}

TEST(Matroid, WarmStartGivesTheSameSize) {
  const auto es = six_state_printed();
  const auto p = six_state_two_input_pattern();
  const auto w = matroid_intersection(LinearMatroid::of_mode(es, 1),
                                      TransversalMatroid(p), {0});
  EXPECT_EQ(w.size, 2);
}

TEST(Matroid, MismatchedGroundSetsThrow) {
  const auto es = six_state_printed();
  EXPECT_THROW(matroid_intersection(LinearMatroid::of_mode(es, 0),
                                    TransversalMatroid(SparsityPattern(5, 2))),
               DimensionError);
}
