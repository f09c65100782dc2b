#pragma once

#include "eqflow/certificate.hpp"
#include "eqflow/equilibrium.hpp"
#include "eqflow/flow.hpp"
#include "eqflow/instance.hpp"
#include "eqflow/line_search.hpp"
#include "eqflow/penalty.hpp"
#include "eqflow/shortest_path.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqflow {

struct SolverParams {
  std::size_t max_iters = 10000;
  double rel_gap = 1e-8;
  double feas_tol = 1e-6;         // absolute per-arc overflow accepted as feasible
  double infeas_margin = 1e-12;   // lower bound that triggers a certificate attempt
  double line_search_tol = 1e-12;
  double equilibrium_tol = 1e-6;  // reduced-cost tolerance of the final report
  std::uint64_t denominator_limit = kDefaultDenominatorLimit;

  void validate() const {
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    const auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
    };
    positive(rel_gap, "rel_gap");
    positive(feas_tol, "feas_tol");
    positive(infeas_margin, "infeas_margin");
    positive(line_search_tol, "line_search_tol");
    positive(equilibrium_tol, "equilibrium_tol");
    if (denominator_limit < 1) throw std::invalid_argument("denominator_limit must be positive");
  }
};

/// One row per visited iterate. `n` counts iterates from 1 (the initial
/// all-or-nothing flow); `alpha` is the step taken from this iterate, 0 on
/// the row that terminated the run.
struct IterationRecord {
  std::size_t n = 0;
  double z = 0.0;
  double alpha = 0.0;
  double aon_value = 0.0;
  double lower_bound = 0.0;
  double max_overflow = 0.0;

  bool operator==(const IterationRecord&) const = default;
};

enum class Verdict { kFeasible, kInfeasible, kUndecided };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kFeasible: return "feasible";
    case Verdict::kInfeasible: return "infeasible";
    case Verdict::kUndecided: return "undecided";
  }
  return "undecided";
}

enum class StopReason {
  kWithinCapacity,  // max overflow <= feas_tol
  kCertified,       // exact cut certificate found
  kGapClosed,       // relative duality gap <= rel_gap
  kIterationLimit,
};

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::kWithinCapacity: return "within-capacity";
    case StopReason::kCertified: return "certified";
    case StopReason::kGapClosed: return "gap-closed";
    case StopReason::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

struct SolveResult {
  Verdict verdict = Verdict::kUndecided;
  StopReason reason = StopReason::kIterationLimit;
  PseudoFlow flow;
  AggregateFlow aggregate_flow;
  double objective = 0.0;
  double best_lower_bound = -std::numeric_limits<double>::infinity();
  double max_overflow = 0.0;
  double linear_cost = 0.0;  // sum_a c_a f_a
  std::optional<double> overflow_bound;  // min-cost model only
  std::size_t iterations = 0;  // Move steps performed
  std::size_t certificate_attempts = 0;
  std::vector<IterationRecord> trace;
  std::optional<CutCertificate> certificate;
  EquilibriumReport equilibrium;
};

/// Initial pseudo-flow: all-or-nothing under all-zero weights, which routes
/// each commodity on its hop-minimal path (ties by node and arc index).
inline PseudoFlow initialize(const Instance& instance) {
  return all_or_nothing(instance, std::vector<double>(instance.num_arcs(), 0.0)).flow;
}

/// Convexity bound z(f) - <f, grad z(f)> + min_x <x, grad z(f)>, with the
/// gradient given by the weights h(f) and the minimum by the all-or-nothing
/// value. A positive bound means the penalty program has no zero optimum.
inline double lower_bound(const Instance& instance, const PenaltyModel& model,
                          const AggregateFlow& agg, double aon_value) {
  double z = 0.0;
  double gradient_dot_flow = 0.0;
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    const Arc& arc = instance.arc(a);
    z += arc_integral<double>(model, agg[a], arc.capacity, arc.cost);
    gradient_dot_flow += penalty_value<double>(model, agg[a], arc.capacity, arc.cost) * agg[a];
  }
  return z - gradient_dot_flow + aon_value;
}

inline double lower_bound(const Instance& instance, const PenaltyModel& model,
                          const PseudoFlow& flow, double aon_value) {
  return lower_bound(instance, model, aggregate(instance, flow), aon_value);
}

/// Frank-Wolfe on the penalty program. Each iteration weights arcs by
/// h(f_n), routes all-or-nothing on shortest paths to get y_n, line-searches
/// exactly on [f_n, y_n] and moves. Stops on the first of
///   within capacity (feasible), exact certificate (infeasible),
///   closed relative gap, iteration limit (both undecided).
/// `observer` sees every record as soon as it is final.
inline SolveResult fw_solve(const Instance& instance, const PenaltyModel& model,
                            const SolverParams& params = {},
                            const std::function<void(const IterationRecord&)>& observer = {}) {
  params.validate();
  SolveResult result;
  PseudoFlow flow = initialize(instance);

  for (std::size_t n = 1;; ++n) {
    const AggregateFlow agg = aggregate(instance, flow);
    const std::vector<double> weights = penalty_weights(model, instance, agg);
    const double z = objective(model, instance, agg).z;
    const Overflow overflow = max_overflow(instance, agg);
    AllOrNothing direction = all_or_nothing(instance, weights);
    const double lb = lower_bound(instance, model, agg, direction.value);
    result.best_lower_bound = std::max(result.best_lower_bound, lb);
    result.trace.push_back({n, z, 0.0, direction.value, lb, overflow.amount});

    std::optional<StopReason> stop;
    if (model.decides_feasibility() && overflow.amount <= params.feas_tol) {
      result.verdict = Verdict::kFeasible;
      stop = StopReason::kWithinCapacity;
    }
    if (!stop && model.decides_feasibility() && result.best_lower_bound > params.infeas_margin) {
      ++result.certificate_attempts;
      CertificateSearch search = build_certificate(instance, model, flow, params.denominator_limit);
      if (search.found()) {
        result.verdict = Verdict::kInfeasible;
        result.certificate = std::move(search.certificate);
        stop = StopReason::kCertified;
      }
    }
    if (!stop) {
      const double gap = (z - std::max(result.best_lower_bound, 0.0)) / std::max(z, 1e-300);
      if (gap <= params.rel_gap) stop = StopReason::kGapClosed;
    }
    if (!stop && result.iterations >= params.max_iters) stop = StopReason::kIterationLimit;

    if (stop) {
      if (observer) observer(result.trace.back());
      result.reason = *stop;
      result.flow = std::move(flow);
      result.aggregate_flow = agg;
      result.objective = z;
      result.max_overflow = overflow.amount;
      break;
    }

    const AggregateFlow target = aggregate(instance, direction.flow);
    const double alpha = line_search(model, instance, agg, target, params.line_search_tol);
    result.trace.back().alpha = alpha;
    if (observer) observer(result.trace.back());
    flow = combine(flow, direction.flow, alpha);
    ++result.iterations;
  }

  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    result.linear_cost += instance.arc(a).cost * result.aggregate_flow[a];
  }
  result.equilibrium = verify_equilibrium(instance, model, result.flow, params.equilibrium_tol);

  if (model.kind == PenaltyKind::kMinCost) {
    // On a used path, M * (overflow summed along it) = lambda_k - cost(path)
    // <= lambda_k - (cheapest path cost), so that gap over M bounds each
    // overflow carried by commodity k.
    std::vector<double> costs(instance.num_arcs());
    for (ArcIndex a = 0; a < instance.num_arcs(); ++a) costs[a] = instance.arc(a).cost;
    double bound = 0.0;
    for (const auto& [source, members] : instance.commodities_by_source()) {
      const auto tree = shortest_paths<double>(instance, costs, source);
      for (CommodityIndex k : members) {
        const double spread =
            result.equilibrium.per_commodity[k].path_length - tree.dist[instance.commodity(k).sink];
        bound = std::max(bound, spread / model.big_m);
      }
    }
    result.overflow_bound = bound;
  }
  return result;
}

}  // namespace eqflow
