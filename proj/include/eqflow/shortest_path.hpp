#pragma once

#include "eqflow/flow.hpp"
#include "eqflow/instance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace eqflow {

class NegativeWeightError : public std::invalid_argument {
 public:
  explicit NegativeWeightError(ArcIndex arc)
      : std::invalid_argument("NegativeWeight: arc " + std::to_string(arc)), arc_(arc) {}
  ArcIndex arc() const { return arc_; }

 private:
  ArcIndex arc_;
};

class UnreachableError : public std::runtime_error {
 public:
  explicit UnreachableError(NodeIndex node)
      : std::runtime_error("Unreachable: node " + std::to_string(node)), node_(node) {}
  NodeIndex node() const { return node_; }

 private:
  NodeIndex node_;
};

inline constexpr ArcIndex kNoArc = std::numeric_limits<ArcIndex>::max();

/// Single-source shortest-path tree. `hops` is the arc count of the chosen
/// path and acts as the secondary key.
template <class W>
struct DistanceMap {
  NodeIndex source = 0;
  std::vector<W> dist;
  std::vector<std::size_t> hops;
  std::vector<ArcIndex> parent;  // kNoArc at the source and unreached nodes
  std::vector<bool> reached;

  bool reachable(NodeIndex v) const { return reached[v]; }

  bool operator==(const DistanceMap&) const = default;
};

/// Dijkstra over nonnegative weights with a fixed tie-break: nodes are
/// settled in lexicographic order of (distance, hop count, node index), and a
/// node's parent is the smallest-index arc attaining its final label from an
/// already-settled tail.
template <class W>
DistanceMap<W> shortest_paths(const Instance& instance, std::span<const W> weights,
                              NodeIndex source) {
  for (ArcIndex a = 0; a < weights.size(); ++a) {
    if constexpr (std::is_floating_point_v<W>) {
      if (!(weights[a] >= 0) || !std::isfinite(weights[a])) throw NegativeWeightError(a);
    } else {
      if (weights[a] < 0) throw NegativeWeightError(a);
    }
  }

  const std::size_t n = instance.num_nodes();
  DistanceMap<W> map;
  map.source = source;
  map.dist.assign(n, W(0));
  map.hops.assign(n, 0);
  map.parent.assign(n, kNoArc);
  map.reached.assign(n, false);
  std::vector<bool> settled(n, false);

  using Entry = std::tuple<W, std::size_t, NodeIndex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  map.reached[source] = true;
  queue.emplace(W(0), 0, source);

  while (!queue.empty()) {
    auto [d, h, v] = queue.top();
    queue.pop();
    if (settled[v] || d != map.dist[v] || h != map.hops[v]) continue;
    settled[v] = true;
    for (ArcIndex a : instance.out_arcs(v)) {
      const NodeIndex w = instance.arc(a).head;
      if (settled[w]) continue;
      W candidate = map.dist[v] + weights[a];
      const std::size_t candidate_hops = map.hops[v] + 1;
      if (!map.reached[w] || candidate < map.dist[w] ||
          (candidate == map.dist[w] && candidate_hops < map.hops[w])) {
        map.reached[w] = true;
        map.dist[w] = candidate;
        map.hops[w] = candidate_hops;
        map.parent[w] = a;
        queue.emplace(std::move(candidate), candidate_hops, w);
      } else if (candidate == map.dist[w] && candidate_hops == map.hops[w] && a < map.parent[w]) {
        map.parent[w] = a;
      }
    }
  }
  return map;
}

template <class W>
DistanceMap<W> shortest_paths(const Instance& instance, const std::vector<W>& weights,
                              NodeIndex source) {
  return shortest_paths<W>(instance, std::span<const W>(weights), source);
}

/// Arcs of the tree path from the map's source to `sink`, source first.
template <class W>
std::vector<ArcIndex> extract_path(const Instance& instance, const DistanceMap<W>& map,
                                   NodeIndex sink) {
  if (!map.reachable(sink)) throw UnreachableError(sink);
  std::vector<ArcIndex> path;
  for (NodeIndex v = sink; v != map.source;) {
    const ArcIndex a = map.parent[v];
    path.push_back(a);
    v = instance.arc(a).tail;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

/// Solution of the linear subproblem: every commodity's demand routed on its
/// shortest path under fixed weights.
struct AllOrNothing {
  PseudoFlow flow;
  std::vector<double> path_length;  // l_k per commodity
  double value = 0.0;               // sum_k l_k d_k, ascending k
};

/// One shortest-path tree per distinct source serves all commodities
/// leaving it; results are written in ascending commodity order.
inline AllOrNothing all_or_nothing(const Instance& instance, std::span<const double> weights) {
  AllOrNothing result;
  result.flow = PseudoFlow::zero(instance);
  result.path_length.assign(instance.num_commodities(), 0.0);
  for (const auto& [source, members] : instance.commodities_by_source()) {
    const auto tree = shortest_paths<double>(instance, weights, source);
    for (CommodityIndex k : members) {
      const Commodity& c = instance.commodity(k);
      for (ArcIndex a : extract_path(instance, tree, c.sink)) {
        result.flow[k][a] = c.demand;
      }
      result.path_length[k] = tree.dist[c.sink];
    }
  }
  for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
    result.value += result.path_length[k] * instance.commodity(k).demand;
  }
  return result;
}

inline AllOrNothing all_or_nothing(const Instance& instance, const std::vector<double>& weights) {
  return all_or_nothing(instance, std::span<const double>(weights));
}

}  // namespace eqflow
