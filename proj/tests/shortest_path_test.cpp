#include "eqflow/shortest_path.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace eqflow {
namespace {

// Minimum length over all simple s-t paths, by exhaustive enumeration.
double brute_force_distance(const Instance& inst, const std::vector<double>& w, NodeIndex s,
                            NodeIndex t) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> on_path(inst.num_nodes(), false);
  const auto dfs = [&](auto&& self, NodeIndex v, double length) -> void {
    if (v == t) {
      best = std::min(best, length);
      return;
    }
    on_path[v] = true;
    for (ArcIndex a : inst.out_arcs(v)) {
      if (!on_path[inst.arc(a).head]) self(self, inst.arc(a).head, length + w[a]);
    }
    on_path[v] = false;
  };
  dfs(dfs, s, 0.0);
  return best;
}

Instance path_graph() {
  RawInstance raw;
  raw.add_node("s").add_node("m").add_node("t");
  raw.add_arc("s", "m", 10).add_arc("m", "t", 10).add_arc("s", "t", 10).add_commodity("s", "t", 1);
  return validate_instance(raw);
}

TEST(ShortestPaths, ZeroWeightsGiveZeroDistancesAndFewestHops) {
  RawInstance raw;
  raw.add_node("s").add_node("a").add_node("t");
  raw.add_arc("s", "a", 1).add_arc("a", "t", 1).add_arc("s", "t", 1).add_arc("s", "t", 1);
  raw.add_commodity("s", "t", 1);
  const Instance inst = validate_instance(raw);
  const auto map = shortest_paths(inst, std::vector<double>(4, 0.0), 0);
  EXPECT_EQ(map.dist, (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(map.parent[1], 0u);
  EXPECT_EQ(map.parent[2], 2u);  // one hop, smaller of the parallel pair
  EXPECT_EQ(map.parent[0], kNoArc);
}

TEST(ShortestPaths, ParallelArcsPreferLighter) {
  const Instance inst = testing::diamond();
  const auto map = shortest_paths(inst, std::vector<double>{1.0, 0.0}, 0);
  EXPECT_EQ(map.dist[1], 0.0);
  EXPECT_EQ(map.parent[1], 1u);
}

TEST(ShortestPaths, PathGraphMatchesEnumeration) {
  const Instance inst = path_graph();
  const std::vector<double> w{2.0, 3.0, 6.0};
  const auto map = shortest_paths(inst, w, 0);
  EXPECT_EQ(brute_force_distance(inst, w, 0, 2), 5.0);  // s-m-t = 5 vs s-t = 6
  EXPECT_EQ(map.dist[2], 5.0);
  EXPECT_EQ(extract_path(inst, map, 2), (std::vector<ArcIndex>{0, 1}));
}

TEST(ShortestPaths, RejectsNegativeWeight) {
  const Instance inst = path_graph();
  EXPECT_THROW(shortest_paths(inst, std::vector<double>{1.0, -1.0, 0.0}, 0), NegativeWeightError);
  EXPECT_THROW(shortest_paths(inst, std::vector<Rational>{1, Rational(-1, 3), 0}, 0), NegativeWeightError);
  EXPECT_THROW(shortest_paths(inst, std::vector<double>{1.0, NAN, 0.0}, 0), NegativeWeightError);
}

TEST(ExtractPath, SourceToItselfIsEmpty) {
  const Instance inst = path_graph();
  const auto map = shortest_paths(inst, std::vector<double>{2.0, 3.0, 6.0}, 0);
  EXPECT_TRUE(extract_path(inst, map, 0).empty());
}

TEST(ExtractPath, ParallelArcs) {
  const Instance inst = testing::diamond();
  const auto map = shortest_paths(inst, std::vector<double>{1.0, 0.0}, 0);
  EXPECT_EQ(extract_path(inst, map, 1), (std::vector<ArcIndex>{1}));
}

TEST(ExtractPath, UnreachableSinkThrows) {
  const Instance inst = path_graph();
  const auto map = shortest_paths(inst, std::vector<double>{2.0, 3.0, 6.0}, 2);
  EXPECT_THROW(extract_path(inst, map, 0), UnreachableError);
}

TEST(AllOrNothing, SingleArc) {
  const Instance inst = testing::instance_a();
  const auto aon = all_or_nothing(inst, std::vector<double>{0.0});
  EXPECT_EQ(aon.flow[0][0], 3.0);
  EXPECT_EQ(aon.value, 0.0);
}

TEST(AllOrNothing, DiamondRoutesOnLighterArc) {
  const Instance inst = testing::diamond();
  const auto aon = all_or_nothing(inst, std::vector<double>{1.0, 0.0});
  EXPECT_EQ(aon.flow[0], (std::vector<double>{0.0, 3.0}));
}

TEST(AllOrNothing, SharedSourceDivergingSinks) {
  // s->a (1), s->b (4), a->b (1), b->a (5); commodities s->a (d=2), s->b (d=3)
  RawInstance raw;
  raw.add_node("s").add_node("a").add_node("b");
  raw.add_arc("s", "a", 9).add_arc("s", "b", 9).add_arc("a", "b", 9).add_arc("b", "a", 9);
  raw.add_commodity("s", "a", 2).add_commodity("s", "b", 3);
  const Instance inst = validate_instance(raw);
  const std::vector<double> w{1.0, 4.0, 1.0, 5.0};
  const auto aon = all_or_nothing(inst, w);
  const double expected = brute_force_distance(inst, w, 0, 1) * 2 + brute_force_distance(inst, w, 0, 2) * 3;
  EXPECT_EQ(expected, 1.0 * 2 + 2.0 * 3);
  EXPECT_EQ(aon.value, expected);
  EXPECT_EQ(aon.flow[0], (std::vector<double>{2.0, 0.0, 0.0, 0.0}));
  EXPECT_EQ(aon.flow[1], (std::vector<double>{3.0, 0.0, 3.0, 0.0}));
  double linearized = 0.0;
  const AggregateFlow agg = aggregate(inst, aon.flow);
  for (ArcIndex a = 0; a < 4; ++a) linearized += w[a] * agg[a];
  EXPECT_EQ(linearized, expected);
}

std::vector<double> random_weights(const Instance& inst, std::mt19937_64& rng) {
  std::vector<double> w(inst.num_arcs());
  for (auto& x : w) x = rng() % 4 == 0 ? 0.0 : 5.0 * testing::unit(rng);
  return w;
}

TEST(ShortestPathProperties, BellmanConditionsAndTightParents) {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance inst = testing::random_instance(seed);
    const auto w = random_weights(inst, rng);
    const NodeIndex source = inst.commodity(0).source;
    const auto map = shortest_paths(inst, w, source);
    for (ArcIndex a = 0; a < inst.num_arcs(); ++a) {
      const Arc& arc = inst.arc(a);
      if (!map.reached[arc.tail]) continue;
      EXPECT_TRUE(map.reached[arc.head]);
      EXPECT_LE(map.dist[arc.head], map.dist[arc.tail] + w[a]);
    }
    for (NodeIndex v = 0; v < inst.num_nodes(); ++v) {
      if (v == source || !map.reached[v]) continue;
      const ArcIndex p = map.parent[v];
      EXPECT_EQ(map.dist[v], map.dist[inst.arc(p).tail] + w[p]);
      EXPECT_EQ(map.dist[v], brute_force_distance(inst, w, source, v));
      double length = 0.0;
      for (ArcIndex a : extract_path(inst, map, v)) length += w[a];
      EXPECT_NEAR(length, map.dist[v], 1e-12);
    }
  }
}

TEST(ShortestPathProperties, ExactAndFloatingDistancesAgreeOnDyadicWeights) {
  std::mt19937_64 rng(32);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = testing::random_instance(seed);
    std::vector<double> w(inst.num_arcs());
    std::vector<Rational> exact(inst.num_arcs());
    for (ArcIndex a = 0; a < inst.num_arcs(); ++a) {
      const int units = static_cast<int>(rng() % 9);
      w[a] = units / 4.0;
      exact[a] = Rational(units, 4);
    }
    const NodeIndex s = inst.commodity(0).source;
    const auto fm = shortest_paths(inst, w, s);
    const auto em = shortest_paths(inst, exact, s);
    EXPECT_EQ(fm.parent, em.parent);
    for (NodeIndex v = 0; v < inst.num_nodes(); ++v) {
      if (fm.reached[v]) { EXPECT_EQ(rational_from_double(fm.dist[v]), em.dist[v]); }
    }
  }
}

TEST(ShortestPathProperties, AllOrNothingBeatsRandomRoutings) {
  std::mt19937_64 rng(33);
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance inst = testing::random_instance(seed);
    const auto w = random_weights(inst, rng);
    const AggregateFlow best = aggregate(inst, all_or_nothing(inst, w).flow);
    const AggregateFlow other = aggregate(inst, testing::random_pseudo_flow(inst, rng));
    double lhs = 0.0;
    double rhs = 0.0;
    for (ArcIndex a = 0; a < inst.num_arcs(); ++a) {
      lhs += w[a] * best[a];
      rhs += w[a] * other[a];
    }
    EXPECT_LE(lhs, rhs + 1e-9) << "seed " << seed;
  }
}

TEST(ShortestPathProperties, Deterministic) {
  std::mt19937_64 rng(34);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = testing::random_instance(seed);
    const auto w = random_weights(inst, rng);
    EXPECT_EQ(shortest_paths(inst, w, 0), shortest_paths(inst, w, 0));
    const auto a = all_or_nothing(inst, w);
    const auto b = all_or_nothing(inst, w);
    EXPECT_EQ(a.flow, b.flow);
    EXPECT_EQ(a.value, b.value);
  }
}

}  // namespace
}  // namespace eqflow
