#pragma once

#include "eqflow/eqflow.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace eqflow::testing {

// Single arc s->t with capacity 5 and demand 3.
inline Instance instance_a() {
  RawInstance raw;
  raw.add_node("s").add_node("t").add_arc("s", "t", 5).add_commodity("s", "t", 3);
  return validate_instance(raw);
}

// Single arc s->t with capacity 2 and demand 3.
inline Instance instance_b() {
  RawInstance raw;
  raw.add_node("s").add_node("t").add_arc("s", "t", 2).add_commodity("s", "t", 3);
  return validate_instance(raw);
}

// Two parallel arcs s->t, capacities 2 and 2, demand 3.
inline Instance diamond() {
  RawInstance raw;
  raw.add_node("s").add_node("t").add_arc("s", "t", 2).add_arc("s", "t", 2).add_commodity("s", "t", 3);
  return validate_instance(raw);
}

// Commodity k0 (s0->t0) may use the bypass arc s0->t0 (capacity 1) or the
// shared arc x->y; commodity k1 (s1->t1) must use the shared arc.
// Arc order: s0->x, s1->x, x->y (shared), y->t0, y->t1, s0->t0 (bypass).
inline Instance bottleneck(int shared_capacity) {
  RawInstance raw;
  for (const char* n : {"s0", "s1", "x", "y", "t0", "t1"}) raw.add_node(n);
  raw.add_arc("s0", "x", 10)
      .add_arc("s1", "x", 10)
      .add_arc("x", "y", shared_capacity)
      .add_arc("y", "t0", 10)
      .add_arc("y", "t1", 10)
      .add_arc("s0", "t0", 1)
      .add_commodity("s0", "t0", 2)
      .add_commodity("s1", "t1", 2);
  return validate_instance(raw);
}

inline constexpr ArcIndex kSharedArc = 2;
inline constexpr ArcIndex kBypassArc = 5;

// Parallel arcs with costs (1, 2), capacities (1, 2), demand 2.
inline Instance min_cost_pair() {
  RawInstance raw;
  raw.add_node("s").add_node("t").add_arc("s", "t", 1, 1).add_arc("s", "t", 2, 2).add_commodity("s", "t", 2);
  return validate_instance(raw);
}

// Uniform double in [0, 1) from the generator's raw output.
inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Random simple s-t path by randomized depth-first search; independent of
// the library's shortest-path code.
inline std::vector<ArcIndex> random_path(const Instance& instance, NodeIndex s, NodeIndex t,
                                         std::mt19937_64& rng) {
  std::vector<bool> visited(instance.num_nodes(), false);
  std::vector<ArcIndex> path;
  const auto dfs = [&](auto&& self, NodeIndex v) -> bool {
    if (v == t) return true;
    visited[v] = true;
    std::vector<ArcIndex> out = instance.out_arcs(v);
    std::shuffle(out.begin(), out.end(), rng);
    for (ArcIndex a : out) {
      const NodeIndex w = instance.arc(a).head;
      if (visited[w]) continue;
      path.push_back(a);
      if (self(self, w)) return true;
      path.pop_back();
    }
    return false;
  };
  dfs(dfs, s);
  return path;
}

// Pseudo-flow mixing up to `paths` random simple paths per commodity with
// random convex weights.
inline PseudoFlow random_pseudo_flow(const Instance& instance, std::mt19937_64& rng,
                                     int paths = 3) {
  PseudoFlow flow = PseudoFlow::zero(instance);
  for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    std::vector<double> share(static_cast<std::size_t>(1 + rng() % paths));
    double total = 0.0;
    for (auto& w : share) total += (w = unit(rng) + 0.05);
    for (double w : share) {
      for (ArcIndex a : random_path(instance, c.source, c.sink, rng)) {
        flow[k][a] += c.demand * w / total;
      }
    }
  }
  return flow;
}

// Generated tiny instances straddle the feasibility boundary.
inline Instance random_instance(std::uint64_t seed) { return oracle::gen_instance(seed); }

}  // namespace eqflow::testing
