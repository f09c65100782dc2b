#pragma once

// JSON file formats: instances, flows, certificates, solve reports and the
// line-oriented iteration trace.

#include "eqflow/certificate.hpp"
#include "eqflow/flow.hpp"
#include "eqflow/instance.hpp"
#include "eqflow/rational.hpp"
#include "eqflow/solver.hpp"

#include "json.hpp"

#include <fstream>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqflow::io {

using Json = nlohmann::json;

inline constexpr const char* kFormatTag = "eqflow-v1";

/// Malformed input: bad JSON, wrong shape, unknown key or unparsable number.
/// The message names the offending field.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown_keys(const Json& object, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  if (!object.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* name : allowed) known = known || key == name;
    if (!known) throw InputError(where + ": unknown key \"" + key + "\"");
  }
}

inline const Json& require(const Json& object, const char* key, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) throw InputError(where + ": missing key \"" + key + "\"");
  return *it;
}

inline std::string identifier(const Json& value, const std::string& where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  throw InputError(where + ": expected a string or integer identifier");
}

inline void check_format(const Json& root) {
  if (const auto it = root.find("format"); it != root.end()) {
    if (!it->is_string() || it->get<std::string>() != kFormatTag) {
      throw InputError("format: expected \"" + std::string(kFormatTag) + "\"");
    }
  }
}

}  // namespace detail

/// A JSON number or an exact string ("3", "5/2", "0.25").
inline Rational parse_number(const Json& value, const std::string& where) {
  try {
    if (value.is_number_integer()) {
      if (value.is_number_unsigned()) return Rational(BigInt(value.get<unsigned long long>()));
      return Rational(BigInt(value.get<long long>()));
    }
    if (value.is_number_float()) return rational_from_shortest_decimal(value.get<double>());
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": expected a number or a \"p/q\" string");
}

inline Json parse_json(std::istream& in, const std::string& what) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(what + ": malformed JSON: " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  return parse_json(in, path);
}

inline RawInstance parse_raw_instance(const Json& root) {
  detail::reject_unknown_keys(root, {"format", "nodes", "arcs", "commodities"}, "instance");
  detail::check_format(root);
  RawInstance raw;
  const Json& nodes = detail::require(root, "nodes", "instance");
  if (!nodes.is_array()) throw InputError("nodes: expected an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].is_string()) throw InputError("nodes[" + std::to_string(i) + "]: expected a string");
    raw.nodes.push_back(nodes[i].get<std::string>());
  }
  const Json& arcs = detail::require(root, "arcs", "instance");
  if (!arcs.is_array()) throw InputError("arcs: expected an array");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const std::string where = "arcs[" + std::to_string(i) + "]";
    const Json& arc = arcs[i];
    detail::reject_unknown_keys(arc, {"id", "tail", "head", "capacity", "cost"}, where);
    RawArc out;
    out.id = detail::identifier(detail::require(arc, "id", where), where + ".id");
    out.tail = detail::identifier(detail::require(arc, "tail", where), where + ".tail");
    out.head = detail::identifier(detail::require(arc, "head", where), where + ".head");
    out.capacity = parse_number(detail::require(arc, "capacity", where), where + ".capacity");
    out.cost = arc.contains("cost") ? parse_number(arc["cost"], where + ".cost") : Rational(0);
    raw.arcs.push_back(std::move(out));
  }
  const Json& commodities = detail::require(root, "commodities", "instance");
  if (!commodities.is_array()) throw InputError("commodities: expected an array");
  for (std::size_t i = 0; i < commodities.size(); ++i) {
    const std::string where = "commodities[" + std::to_string(i) + "]";
    const Json& c = commodities[i];
    detail::reject_unknown_keys(c, {"id", "source", "sink", "demand"}, where);
    RawCommodity out;
    out.id = detail::identifier(detail::require(c, "id", where), where + ".id");
    out.source = detail::identifier(detail::require(c, "source", where), where + ".source");
    out.sink = detail::identifier(detail::require(c, "sink", where), where + ".sink");
    out.demand = parse_number(detail::require(c, "demand", where), where + ".demand");
    raw.commodities.push_back(std::move(out));
  }
  return raw;
}

inline Json instance_to_json(const Instance& instance) {
  Json root;
  root["format"] = kFormatTag;
  root["nodes"] = Json::array();
  for (NodeIndex v = 0; v < instance.num_nodes(); ++v) root["nodes"].push_back(instance.node_name(v));
  root["arcs"] = Json::array();
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    const Arc& arc = instance.arc(a);
    root["arcs"].push_back({{"id", instance.arc_name(a)},
                            {"tail", instance.node_name(arc.tail)},
                            {"head", instance.node_name(arc.head)},
                            {"capacity", to_string(arc.exact_capacity)},
                            {"cost", to_string(arc.exact_cost)}});
  }
  root["commodities"] = Json::array();
  for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    root["commodities"].push_back({{"id", instance.commodity_name(k)},
                                   {"source", instance.node_name(c.source)},
                                   {"sink", instance.node_name(c.sink)},
                                   {"demand", to_string(c.exact_demand)}});
  }
  return root;
}

inline Instance read_instance(const std::string& path) {
  return validate_instance(parse_raw_instance(read_json_file(path)));
}

/// Flow file: {"flows": {"<commodity id>": {"<arc id>": value, ...}, ...}}.
/// Omitted commodities and arcs carry zero flow.
inline ExactPseudoFlow parse_flow(const Instance& instance, const Json& root) {
  detail::reject_unknown_keys(root, {"format", "flows"}, "flow");
  detail::check_format(root);
  ExactPseudoFlow flow = ExactPseudoFlow::zero(instance);
  const Json& flows = detail::require(root, "flows", "flow");
  if (!flows.is_object()) throw InputError("flows: expected an object keyed by commodity id");
  for (const auto& [commodity_id, arcs] : flows.items()) {
    const auto k = instance.commodity_index().find(commodity_id);
    if (k == instance.commodity_index().end()) {
      throw InputError("flows: unknown commodity \"" + commodity_id + "\"");
    }
    if (!arcs.is_object()) throw InputError("flows." + commodity_id + ": expected an object keyed by arc id");
    for (const auto& [arc_id, value] : arcs.items()) {
      const auto a = instance.arc_index().find(arc_id);
      if (a == instance.arc_index().end()) {
        throw InputError("flows." + commodity_id + ": unknown arc \"" + arc_id + "\"");
      }
      flow[k->second][a->second] = parse_number(value, "flows." + commodity_id + "." + arc_id);
    }
  }
  return flow;
}

inline PseudoFlow to_double(const ExactPseudoFlow& exact) {
  PseudoFlow out;
  for (const auto& row : exact.per_commodity) {
    auto& dst = out.per_commodity.emplace_back();
    for (const auto& v : row) dst.push_back(eqflow::to_double(v));
  }
  return out;
}

inline Json flow_to_json(const Instance& instance, const PseudoFlow& flow) {
  Json flows = Json::object();
  for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
    Json arcs = Json::object();
    for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
      if (flow[k][a] != 0.0) arcs[instance.arc_name(a)] = format_decimal(flow[k][a]);
    }
    flows[instance.commodity_name(k)] = std::move(arcs);
  }
  return flows;
}

inline Json certificate_to_json(const Instance& instance, const CutCertificate& cert) {
  Json weights = Json::object();
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    weights[instance.arc_name(a)] = to_string(cert.weights[a]);
  }
  return {{"format", kFormatTag},
          {"weights", std::move(weights)},
          {"lhs", to_string(cert.lhs)},
          {"rhs", to_string(cert.rhs)}};
}

/// Certificate file. Arcs absent from "weights" get weight 0; the stored
/// lhs/rhs, when present, are parsed but never trusted.
inline CutCertificate parse_certificate(const Instance& instance, const Json& root) {
  detail::reject_unknown_keys(root, {"format", "weights", "lhs", "rhs"}, "certificate");
  detail::check_format(root);
  CutCertificate cert;
  cert.weights.assign(instance.num_arcs(), Rational(0));
  const Json& weights = detail::require(root, "weights", "certificate");
  if (!weights.is_object()) throw InputError("weights: expected an object keyed by arc id");
  for (const auto& [arc_id, value] : weights.items()) {
    const auto a = instance.arc_index().find(arc_id);
    if (a == instance.arc_index().end()) throw InputError("weights: unknown arc \"" + arc_id + "\"");
    Rational w = parse_number(value, "weights." + arc_id);
    if (w < 0) throw InputError("weights." + arc_id + ": negative weight " + to_string(w));
    cert.weights[a->second] = std::move(w);
  }
  if (root.contains("lhs")) cert.lhs = parse_number(root["lhs"], "lhs");
  if (root.contains("rhs")) cert.rhs = parse_number(root["rhs"], "rhs");
  return cert;
}

/// Trace row: "n z alpha aon_value lb max_overflow", decimals at 17
/// significant digits.
inline std::string trace_line(const IterationRecord& r) {
  std::ostringstream line;
  line << r.n << ' ' << format_decimal(r.z) << ' ' << format_decimal(r.alpha) << ' '
       << format_decimal(r.aon_value) << ' ' << format_decimal(r.lower_bound) << ' '
       << format_decimal(r.max_overflow);
  return line.str();
}

inline constexpr const char* kTraceHeader = "# n z alpha aon_value lb max_overflow";

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kFeasible: return 0;
    case Verdict::kInfeasible: return 1;
    case Verdict::kUndecided: return 2;
  }
  return 2;
}

inline Json params_to_json(const PenaltyModel& model, const SolverParams& params) {
  Json out = {{"penalty", model.name()},
              {"max_iters", params.max_iters},
              {"rel_gap", format_decimal(params.rel_gap)},
              {"feas_tol", format_decimal(params.feas_tol)},
              {"infeas_margin", format_decimal(params.infeas_margin)},
              {"line_search_tol", format_decimal(params.line_search_tol)},
              {"equilibrium_tol", format_decimal(params.equilibrium_tol)},
              {"denominator_limit", params.denominator_limit}};
  if (model.kind == PenaltyKind::kMinCost) out["big_m"] = to_string(model.exact_big_m);
  return out;
}

inline Json equilibrium_to_json(const Instance& instance, const PenaltyModel& model,
                                const EquilibriumReport& eq) {
  Json lengths = Json::object();
  for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
    lengths[instance.commodity_name(k)] = format_decimal(eq.per_commodity[k].path_length);
  }
  return {{"is_equilibrium", eq.is_equilibrium},
          {"classification", to_string(model, eq.classification)},
          {"max_used_reduced_cost", format_decimal(eq.max_used_reduced_cost)},
          {"path_lengths", std::move(lengths)}};
}

/// Machine-readable solve report. Floating values are 17-significant-digit
/// decimal strings and certificate values exact strings, so the document is
/// reproducible byte for byte. Wall time is only included when given.
inline Json solve_report(const Instance& instance, const PenaltyModel& model,
                         const SolverParams& params, const SolveResult& result,
                         std::optional<double> wall_time_seconds = std::nullopt) {
  Json aggregate_json = Json::object();
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    aggregate_json[instance.arc_name(a)] = format_decimal(result.aggregate_flow[a]);
  }
  Json report = {{"format", kFormatTag},
                 {"verdict", to_string(result.verdict)},
                 {"exit_code", exit_code(result.verdict)},
                 {"stop_reason", to_string(result.reason)},
                 {"flows", flow_to_json(instance, result.flow)},
                 {"aggregate", std::move(aggregate_json)},
                 {"objective", format_decimal(result.objective)},
                 {"lower_bound", format_decimal(result.best_lower_bound)},
                 {"iterations", result.iterations},
                 {"max_overflow", format_decimal(result.max_overflow)},
                 {"linear_cost", format_decimal(result.linear_cost)},
                 {"equilibrium", equilibrium_to_json(instance, model, result.equilibrium)},
                 {"params", params_to_json(model, params)}};
  if (result.overflow_bound) report["overflow_bound"] = format_decimal(*result.overflow_bound);
  if (result.certificate) report["certificate"] = certificate_to_json(instance, *result.certificate);
  if (wall_time_seconds) report["wall_time_seconds"] = format_decimal(*wall_time_seconds);
  return report;
}

}  // namespace eqflow::io
