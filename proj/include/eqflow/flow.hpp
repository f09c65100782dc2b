#pragma once

#include "eqflow/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace eqflow {

/// Per-commodity arc flows, indexed [commodity][arc]. A pseudo-flow only has
/// to satisfy conservation and nonnegativity, not capacities.
template <class T>
struct BasicPseudoFlow {
  std::vector<std::vector<T>> per_commodity;

  static BasicPseudoFlow zero(const Instance& instance) {
    return {std::vector<std::vector<T>>(instance.num_commodities(),
                                        std::vector<T>(instance.num_arcs(), T(0)))};
  }

  const std::vector<T>& operator[](CommodityIndex k) const { return per_commodity[k]; }
  std::vector<T>& operator[](CommodityIndex k) { return per_commodity[k]; }
  std::size_t num_commodities() const { return per_commodity.size(); }

  bool operator==(const BasicPseudoFlow&) const = default;
};

using PseudoFlow = BasicPseudoFlow<double>;
using ExactPseudoFlow = BasicPseudoFlow<Rational>;

/// Total flow per arc over all commodities.
template <class T>
struct BasicAggregateFlow {
  std::vector<T> per_arc;

  const T& operator[](ArcIndex a) const { return per_arc[a]; }
  T& operator[](ArcIndex a) { return per_arc[a]; }
  std::size_t size() const { return per_arc.size(); }

  bool operator==(const BasicAggregateFlow&) const = default;
};

using AggregateFlow = BasicAggregateFlow<double>;

/// Sums commodity flows arc by arc in ascending commodity order.
template <class T>
BasicAggregateFlow<T> aggregate(const BasicPseudoFlow<T>& flow, std::size_t num_arcs) {
  BasicAggregateFlow<T> agg{std::vector<T>(num_arcs, T(0))};
  for (const auto& commodity_flow : flow.per_commodity) {
    for (ArcIndex a = 0; a < num_arcs; ++a) {
      agg.per_arc[a] += commodity_flow[a];
    }
  }
  return agg;
}

template <class T>
BasicAggregateFlow<T> aggregate(const Instance& instance, const BasicPseudoFlow<T>& flow) {
  return aggregate(flow, instance.num_arcs());
}

/// (1 - alpha) * f + alpha * y, commodity by commodity, written as
/// f + alpha * (y - f).
template <class T>
BasicPseudoFlow<T> combine(const BasicPseudoFlow<T>& f, const BasicPseudoFlow<T>& y,
                           const T& alpha) {
  BasicPseudoFlow<T> out = f;
  for (std::size_t k = 0; k < f.per_commodity.size(); ++k) {
    for (std::size_t a = 0; a < f.per_commodity[k].size(); ++a) {
      out.per_commodity[k][a] = f.per_commodity[k][a] + alpha * (y.per_commodity[k][a] - f.per_commodity[k][a]);
    }
  }
  return out;
}

template <class T>
struct CommodityBalance {
  T max_violation = T(0);
  NodeIndex node = 0;
};

template <class T>
struct ConservationReport {
  std::vector<CommodityBalance<T>> per_commodity;
  T max_violation = T(0);
  CommodityIndex commodity = 0;
  NodeIndex node = 0;
  bool within_tolerance = true;
};

/// Worst |net outflow - required divergence| per commodity, where the
/// required divergence is +d at the source, -d at the sink, 0 elsewhere.
template <class T>
ConservationReport<T> check_conservation(const Instance& instance, const BasicPseudoFlow<T>& flow,
                                         const T& tol) {
  ConservationReport<T> report;
  report.per_commodity.resize(instance.num_commodities());
  for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    std::vector<T> net(instance.num_nodes(), T(0));
    for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
      net[instance.arc(a).tail] += flow[k][a];
      net[instance.arc(a).head] -= flow[k][a];
    }
    T demand;
    if constexpr (std::is_same_v<T, Rational>) {
      demand = c.exact_demand;
    } else {
      demand = static_cast<T>(c.demand);
    }
    net[c.source] -= demand;
    net[c.sink] += demand;
    auto& balance = report.per_commodity[k];
    for (NodeIndex i = 0; i < instance.num_nodes(); ++i) {
      const T violation = net[i] < T(0) ? T(-net[i]) : net[i];
      if (violation > balance.max_violation) {
        balance.max_violation = violation;
        balance.node = i;
      }
    }
    if (balance.max_violation > report.max_violation) {
      report.max_violation = balance.max_violation;
      report.commodity = k;
      report.node = balance.node;
    }
  }
  report.within_tolerance = !(report.max_violation > tol);
  return report;
}

struct FlowPath {
  std::vector<ArcIndex> arcs;
  double flow = 0.0;
};

struct CommodityPaths {
  std::vector<FlowPath> paths;   // simple source-to-sink paths
  std::vector<FlowPath> cycles;  // circulations carrying no demand
};

struct PathDecomposition {
  std::vector<CommodityPaths> per_commodity;
};

class DecompositionError : public std::runtime_error {
 public:
  DecompositionError(CommodityIndex commodity, double residual)
      : std::runtime_error("DecompositionResidual: commodity " + std::to_string(commodity) +
                           " leaves residual flow " + format_decimal(residual)),
        commodity_(commodity),
        residual_(residual) {}
  CommodityIndex commodity() const { return commodity_; }
  double residual() const { return residual_; }

 private:
  CommodityIndex commodity_;
  double residual_;
};

namespace detail {

// Subtracts the bottleneck of `arcs` from `residual`, zeroing the arc that
// attains it, and returns the bottleneck.
inline double peel(std::vector<double>& residual, const std::vector<ArcIndex>& arcs) {
  ArcIndex argmin = arcs.front();
  for (ArcIndex a : arcs) {
    if (residual[a] < residual[argmin]) argmin = a;
  }
  const double amount = residual[argmin];
  for (ArcIndex a : arcs) residual[a] -= amount;
  residual[argmin] = 0.0;
  return amount;
}

// Smallest-index outgoing arc of `v` still carrying more than `dust`.
inline bool next_arc(const Instance& instance, const std::vector<double>& residual, NodeIndex v,
                     double dust, ArcIndex& out) {
  for (ArcIndex a : instance.out_arcs(v)) {
    if (residual[a] > dust) {
      out = a;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Standard flow decomposition. Walks from the source along the
/// smallest-index arc with remaining flow, peeling off a path on reaching the
/// sink and a cycle whenever the walk revisits a node; leftover circulations
/// are then peeled as cycles. Throws DecompositionError if more than `tol`
/// remains on any arc.
inline PathDecomposition decompose_paths(const Instance& instance, const PseudoFlow& flow,
                                         double tol = 1e-9) {
  const double dust = tol * 1e-3;
  PathDecomposition out;
  out.per_commodity.resize(instance.num_commodities());

  for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    std::vector<double> residual = flow[k];
    auto& result = out.per_commodity[k];

    // walk from `start`; stops at `stop` (sink) or on a revisit
    const auto walk = [&](NodeIndex start, bool to_sink) {
      std::vector<ArcIndex> path;
      std::map<NodeIndex, std::size_t> position{{start, 0}};
      NodeIndex v = start;
      while (!(to_sink && v == c.sink)) {
        ArcIndex a = 0;
        if (!detail::next_arc(instance, residual, v, dust, a)) return false;
        const NodeIndex w = instance.arc(a).head;
        path.push_back(a);
        if (auto it = position.find(w); it != position.end()) {
          std::vector<ArcIndex> cycle(path.begin() + static_cast<std::ptrdiff_t>(it->second),
                                      path.end());
          result.cycles.push_back({cycle, detail::peel(residual, cycle)});
          if (!to_sink) return true;
          path.resize(it->second);
          for (auto p = position.begin(); p != position.end();) {
            p = p->second > it->second ? position.erase(p) : std::next(p);
          }
          v = w;
          continue;
        }
        position.emplace(w, path.size());
        v = w;
      }
      result.paths.push_back({path, detail::peel(residual, path)});
      return true;
    };

    while (walk(c.source, true)) {
    }
    for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
      while (residual[a] > dust) {
        if (!walk(instance.arc(a).tail, false)) break;
      }
    }
    const double leftover = residual.empty() ? 0.0 : *std::max_element(residual.begin(), residual.end());
    if (leftover > tol) {
      throw DecompositionError(k, leftover);
    }
  }
  return out;
}

/// Arc flows rebuilt from a decomposition (paths plus cycles).
inline PseudoFlow recompose(const Instance& instance, const PathDecomposition& decomposition) {
  PseudoFlow flow = PseudoFlow::zero(instance);
  for (CommodityIndex k = 0; k < decomposition.per_commodity.size(); ++k) {
    const auto& parts = decomposition.per_commodity[k];
    for (const auto* group : {&parts.paths, &parts.cycles}) {
      for (const FlowPath& p : *group) {
        for (ArcIndex a : p.arcs) flow[k][a] += p.flow;
      }
    }
  }
  return flow;
}

}  // namespace eqflow
