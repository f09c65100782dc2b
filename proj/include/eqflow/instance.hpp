#pragma once

#include "eqflow/rational.hpp"

#include <cstddef>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eqflow {

using NodeIndex = std::size_t;
using ArcIndex = std::size_t;
using CommodityIndex = std::size_t;

enum class InstanceErrorCode {
  kSelfLoop,
  kSourceEqualsSink,
  kNonpositiveDemand,
  kNegativeCapacity,
  kNegativeCost,
  kUnreachableSink,
  kUnknownNode,
  kDuplicateId,
};

inline const char* to_string(InstanceErrorCode code) {
  switch (code) {
    case InstanceErrorCode::kSelfLoop: return "SelfLoop";
    case InstanceErrorCode::kSourceEqualsSink: return "SourceEqualsSink";
    case InstanceErrorCode::kNonpositiveDemand: return "NonpositiveDemand";
    case InstanceErrorCode::kNegativeCapacity: return "NegativeCapacity";
    case InstanceErrorCode::kNegativeCost: return "NegativeCost";
    case InstanceErrorCode::kUnreachableSink: return "UnreachableSink";
    case InstanceErrorCode::kUnknownNode: return "UnknownNode";
    case InstanceErrorCode::kDuplicateId: return "DuplicateId";
  }
  return "Unknown";
}

/// Rejection raised by validate_instance. `entity` names the offending arc,
/// commodity or node by its external identifier.
class InstanceError : public std::runtime_error {
 public:
  InstanceError(InstanceErrorCode code, std::string entity, const std::string& detail)
      : std::runtime_error(std::string(eqflow::to_string(code)) + ": " + entity + ": " + detail),
        code_(code),
        entity_(std::move(entity)) {}

  InstanceErrorCode code() const { return code_; }
  const std::string& entity() const { return entity_; }

 private:
  InstanceErrorCode code_;
  std::string entity_;
};

struct RawArc {
  std::string id;
  std::string tail;
  std::string head;
  Rational capacity;
  Rational cost;
};

struct RawCommodity {
  std::string id;
  std::string source;
  std::string sink;
  Rational demand;
};

/// Unvalidated instance data as read from a file or assembled in code.
struct RawInstance {
  std::vector<std::string> nodes;
  std::vector<RawArc> arcs;
  std::vector<RawCommodity> commodities;

  RawInstance& add_node(std::string name) {
    nodes.push_back(std::move(name));
    return *this;
  }
  RawInstance& add_arc(std::string tail, std::string head, Rational capacity,
                       Rational cost = Rational(0)) {
    arcs.push_back({"arc" + std::to_string(arcs.size()), std::move(tail), std::move(head),
                    std::move(capacity), std::move(cost)});
    return *this;
  }
  RawInstance& add_commodity(std::string source, std::string sink, Rational demand) {
    commodities.push_back({"k" + std::to_string(commodities.size()), std::move(source),
                           std::move(sink), std::move(demand)});
    return *this;
  }
};

struct Arc {
  NodeIndex tail = 0;
  NodeIndex head = 0;
  double capacity = 0.0;
  double cost = 0.0;
  Rational exact_capacity;
  Rational exact_cost;
};

struct Commodity {
  NodeIndex source = 0;
  NodeIndex sink = 0;
  double demand = 0.0;
  Rational exact_demand;
};

class Instance;
Instance validate_instance(const RawInstance& raw);

/// A validated multi-commodity flow instance. Nodes, arcs and commodities
/// are addressed by dense 0-based indices in input order; external names are
/// kept alongside. Immutable once built.
class Instance {
 public:
  std::size_t num_nodes() const { return node_names_.size(); }
  std::size_t num_arcs() const { return arcs_.size(); }
  std::size_t num_commodities() const { return commodities_.size(); }

  const Arc& arc(ArcIndex a) const { return arcs_[a]; }
  const Commodity& commodity(CommodityIndex k) const { return commodities_[k]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<Commodity>& commodities() const { return commodities_; }

  /// Outgoing arcs of `node` in ascending arc index.
  const std::vector<ArcIndex>& out_arcs(NodeIndex node) const { return out_arcs_[node]; }

  const std::string& node_name(NodeIndex i) const { return node_names_[i]; }
  const std::string& arc_name(ArcIndex a) const { return arc_names_[a]; }
  const std::string& commodity_name(CommodityIndex k) const { return commodity_names_[k]; }

  const std::map<std::string, ArcIndex>& arc_index() const { return arc_lookup_; }
  const std::map<std::string, CommodityIndex>& commodity_index() const {
    return commodity_lookup_;
  }

  /// Distinct commodity sources in ascending node order, each with its
  /// commodities in ascending index order.
  std::vector<std::pair<NodeIndex, std::vector<CommodityIndex>>> commodities_by_source() const {
    std::map<NodeIndex, std::vector<CommodityIndex>> groups;
    for (CommodityIndex k = 0; k < commodities_.size(); ++k) {
      groups[commodities_[k].source].push_back(k);
    }
    return {groups.begin(), groups.end()};
  }

 private:
  friend Instance validate_instance(const RawInstance& raw);
  Instance() = default;

  std::vector<std::string> node_names_;
  std::vector<std::string> arc_names_;
  std::vector<std::string> commodity_names_;
  std::vector<Arc> arcs_;
  std::vector<Commodity> commodities_;
  std::vector<std::vector<ArcIndex>> out_arcs_;
  std::map<std::string, ArcIndex> arc_lookup_;
  std::map<std::string, CommodityIndex> commodity_lookup_;
};

/// Checks the modeling assumptions (no self-loops, s != t, positive demand,
/// nonnegative capacity and cost, sink reachable) and builds the indexed
/// instance. Throws InstanceError naming the first offending entity.
inline Instance validate_instance(const RawInstance& raw) {
  Instance inst;
  std::map<std::string, NodeIndex> node_lookup;
  for (const auto& name : raw.nodes) {
    if (!node_lookup.emplace(name, inst.node_names_.size()).second) {
      throw InstanceError(InstanceErrorCode::kDuplicateId, name, "node listed twice");
    }
    inst.node_names_.push_back(name);
  }
  const auto node_of = [&](const std::string& name, const std::string& owner) {
    const auto it = node_lookup.find(name);
    if (it == node_lookup.end()) {
      throw InstanceError(InstanceErrorCode::kUnknownNode, owner,
                          "references undeclared node \"" + name + "\"");
    }
    return it->second;
  };

  inst.out_arcs_.resize(inst.node_names_.size());
  for (const auto& raw_arc : raw.arcs) {
    if (!inst.arc_lookup_.emplace(raw_arc.id, inst.arcs_.size()).second) {
      throw InstanceError(InstanceErrorCode::kDuplicateId, raw_arc.id, "arc id listed twice");
    }
    Arc arc;
    arc.tail = node_of(raw_arc.tail, raw_arc.id);
    arc.head = node_of(raw_arc.head, raw_arc.id);
    if (arc.tail == arc.head) {
      throw InstanceError(InstanceErrorCode::kSelfLoop, raw_arc.id,
                          "tail and head are both \"" + raw_arc.tail + "\"");
    }
    if (raw_arc.capacity < 0) {
      throw InstanceError(InstanceErrorCode::kNegativeCapacity, raw_arc.id,
                          "capacity " + to_string(raw_arc.capacity));
    }
    if (raw_arc.cost < 0) {
      throw InstanceError(InstanceErrorCode::kNegativeCost, raw_arc.id,
                          "cost " + to_string(raw_arc.cost));
    }
    arc.exact_capacity = raw_arc.capacity;
    arc.exact_cost = raw_arc.cost;
    arc.capacity = to_double(raw_arc.capacity);
    arc.cost = to_double(raw_arc.cost);
    inst.out_arcs_[arc.tail].push_back(inst.arcs_.size());
    inst.arc_names_.push_back(raw_arc.id);
    inst.arcs_.push_back(std::move(arc));
  }

  for (const auto& raw_commodity : raw.commodities) {
    if (!inst.commodity_lookup_.emplace(raw_commodity.id, inst.commodities_.size()).second) {
      throw InstanceError(InstanceErrorCode::kDuplicateId, raw_commodity.id,
                          "commodity id listed twice");
    }
    Commodity commodity;
    commodity.source = node_of(raw_commodity.source, raw_commodity.id);
    commodity.sink = node_of(raw_commodity.sink, raw_commodity.id);
    if (commodity.source == commodity.sink) {
      throw InstanceError(InstanceErrorCode::kSourceEqualsSink, raw_commodity.id,
                          "source and sink are both \"" + raw_commodity.source + "\"");
    }
    if (raw_commodity.demand <= 0) {
      throw InstanceError(InstanceErrorCode::kNonpositiveDemand, raw_commodity.id,
                          "demand " + to_string(raw_commodity.demand));
    }
    commodity.exact_demand = raw_commodity.demand;
    commodity.demand = to_double(raw_commodity.demand);
    inst.commodity_names_.push_back(raw_commodity.id);
    inst.commodities_.push_back(std::move(commodity));
  }

  // reachability, one BFS per distinct source
  for (const auto& [source, members] : inst.commodities_by_source()) {
    std::vector<bool> seen(inst.num_nodes(), false);
    std::deque<NodeIndex> queue{source};
    seen[source] = true;
    while (!queue.empty()) {
      const NodeIndex v = queue.front();
      queue.pop_front();
      for (ArcIndex a : inst.out_arcs_[v]) {
        const NodeIndex w = inst.arcs_[a].head;
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    for (CommodityIndex k : members) {
      if (!seen[inst.commodities_[k].sink]) {
        throw InstanceError(InstanceErrorCode::kUnreachableSink, inst.commodity_names_[k],
                            "no path from \"" + inst.node_names_[source] + "\" to \"" +
                                inst.node_names_[inst.commodities_[k].sink] + "\"");
      }
    }
  }
  return inst;
}

/// Convenience for code-built instances: nodes are taken from arc and
/// commodity endpoints in first-seen order when `raw.nodes` is empty.
inline RawInstance with_implicit_nodes(RawInstance raw) {
  if (!raw.nodes.empty()) return raw;
  std::map<std::string, bool> seen;
  const auto add = [&](const std::string& n) {
    if (seen.emplace(n, true).second) raw.nodes.push_back(n);
  };
  for (const auto& a : raw.arcs) {
    add(a.tail);
    add(a.head);
  }
  for (const auto& c : raw.commodities) {
    add(c.source);
    add(c.sink);
  }
  return raw;
}

}  // namespace eqflow
