#pragma once

#include "eqflow/flow.hpp"
#include "eqflow/instance.hpp"
#include "eqflow/penalty.hpp"
#include "eqflow/shortest_path.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace eqflow {

enum class Classification { kZero, kNonzero };

/// Zero iff h(f_a) carries no overflow term on any arc: f_a <= u_a compared
/// exactly on the stored doubles. For the min-cost model h >= c may be
/// positive everywhere, so this reads as overflow-zero / overflow-positive.
inline Classification classify(const PenaltyModel& model, const AggregateFlow& agg,
                               const Instance& instance) {
  (void)model;
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    if (agg[a] > instance.arc(a).capacity) return Classification::kNonzero;
  }
  return Classification::kZero;
}

inline std::string to_string(const PenaltyModel& model, Classification c) {
  if (model.kind == PenaltyKind::kMinCost) {
    return c == Classification::kZero ? "overflow-zero" : "overflow-positive";
  }
  return c == Classification::kZero ? "zero" : "nonzero";
}

struct CommodityEquilibrium {
  std::vector<double> potential;     // shortest distance from the source under h
  std::vector<double> reduced_cost;  // potential[tail] + h_a - potential[head]
  double max_used_reduced_cost = 0.0;
  double path_length = 0.0;          // potential[sink] - potential[source]
};

struct EquilibriumReport {
  std::vector<CommodityEquilibrium> per_commodity;
  std::vector<double> weights;  // h(f_a)
  double max_used_reduced_cost = 0.0;
  double min_reduced_cost = 0.0;
  bool is_equilibrium = false;
  Classification classification = Classification::kZero;
};

inline constexpr double kUsedFlowFloor = 1e-9;  // relative to the commodity's demand

/// Arc form of the equilibrium conditions: with shortest-path potentials
/// under h, every arc a commodity uses must have zero reduced cost. A used
/// path then has length equal to the potential difference, and no path can
/// be shorter because reduced costs are nonnegative everywhere.
inline EquilibriumReport verify_equilibrium(const Instance& instance, const PenaltyModel& model,
                                            const PseudoFlow& flow, double tol) {
  EquilibriumReport report;
  const AggregateFlow agg = aggregate(instance, flow);
  report.weights = penalty_weights(model, instance, agg);
  report.classification = classify(model, agg, instance);
  report.per_commodity.resize(instance.num_commodities());
  report.min_reduced_cost = std::numeric_limits<double>::infinity();

  for (const auto& [source, members] : instance.commodities_by_source()) {
    const auto tree = shortest_paths<double>(instance, report.weights, source);
    for (CommodityIndex k : members) {
      auto& entry = report.per_commodity[k];
      const Commodity& c = instance.commodity(k);
      entry.potential = tree.dist;
      entry.reduced_cost.assign(instance.num_arcs(), 0.0);
      entry.path_length = tree.dist[c.sink] - tree.dist[source];
      const double floor = kUsedFlowFloor * c.demand;
      for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
        const Arc& arc = instance.arc(a);
        if (!tree.reachable(arc.tail)) continue;
        const double r = tree.dist[arc.tail] + report.weights[a] - tree.dist[arc.head];
        entry.reduced_cost[a] = r;
        report.min_reduced_cost = std::min(report.min_reduced_cost, r);
        if (flow[k][a] > floor) {
          entry.max_used_reduced_cost = std::max(entry.max_used_reduced_cost, r);
        }
      }
      report.max_used_reduced_cost =
          std::max(report.max_used_reduced_cost, entry.max_used_reduced_cost);
    }
  }
  if (report.min_reduced_cost == std::numeric_limits<double>::infinity()) {
    report.min_reduced_cost = 0.0;
  }
  report.is_equilibrium = report.max_used_reduced_cost <= tol;
  return report;
}

/// Length of each decomposed path under the given weights.
inline std::vector<std::vector<double>> path_lengths(const PathDecomposition& decomposition,
                                                     const std::vector<double>& weights) {
  std::vector<std::vector<double>> lengths;
  for (const auto& commodity : decomposition.per_commodity) {
    auto& row = lengths.emplace_back();
    for (const auto& path : commodity.paths) {
      double length = 0.0;
      for (ArcIndex a : path.arcs) length += weights[a];
      row.push_back(length);
    }
  }
  return lengths;
}

}  // namespace eqflow
