#pragma once

#include "eqflow/flow.hpp"
#include "eqflow/instance.hpp"
#include "eqflow/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace eqflow {

enum class PenaltyKind {
  kFeasibility,  // h = overflow
  kQuadratic,    // h = overflow^2
  kMinCost,      // h = cost + M * overflow
};

/// Growth applied to the overflow past capacity. The catalog is closed so
/// that every variant has a closed-form antiderivative.
enum class Growth { kLinear, kQuadratic };

/// Arc penalty h as a function of the aggregate arc flow.
struct PenaltyModel {
  PenaltyKind kind = PenaltyKind::kFeasibility;
  Rational exact_big_m{0};
  double big_m = 0.0;

  static PenaltyModel feasibility() { return {}; }

  static PenaltyModel generalized(Growth growth) {
    PenaltyModel m;
    m.kind = growth == Growth::kLinear ? PenaltyKind::kFeasibility : PenaltyKind::kQuadratic;
    return m;
  }

  static PenaltyModel min_cost(const Rational& big_m) {
    if (big_m <= 0) {
      throw std::invalid_argument("big-M must be positive");
    }
    PenaltyModel m;
    m.kind = PenaltyKind::kMinCost;
    m.exact_big_m = big_m;
    m.big_m = to_double(big_m);
    return m;
  }

  /// True for the variants whose optimum is zero exactly on feasible
  /// instances (h vanishes inside capacity).
  bool decides_feasibility() const { return kind != PenaltyKind::kMinCost; }

  std::string name() const {
    switch (kind) {
      case PenaltyKind::kFeasibility: return "feasibility";
      case PenaltyKind::kQuadratic: return "quadratic";
      case PenaltyKind::kMinCost: return "mincost";
    }
    return "unknown";
  }

  template <class T>
  T big_m_as() const {
    if constexpr (std::is_same_v<T, Rational>) {
      return exact_big_m;
    } else {
      return static_cast<T>(big_m);
    }
  }
};

/// h(f) for one arc. At f == u the inside-capacity branch applies.
template <class T>
T penalty_value(const PenaltyModel& model, const T& flow, const T& capacity, const T& cost) {
  const bool over = flow > capacity;
  const T overflow = over ? T(flow - capacity) : T(0);
  switch (model.kind) {
    case PenaltyKind::kFeasibility: return overflow;
    case PenaltyKind::kQuadratic: return overflow * overflow;
    case PenaltyKind::kMinCost: return T(cost + model.big_m_as<T>() * overflow);
  }
  return T(0);
}

/// Integral of h from 0 to f.
template <class T>
T arc_integral(const PenaltyModel& model, const T& flow, const T& capacity, const T& cost) {
  const T overflow = flow > capacity ? T(flow - capacity) : T(0);
  switch (model.kind) {
    case PenaltyKind::kFeasibility: return T(overflow * overflow / 2);
    case PenaltyKind::kQuadratic: return T(overflow * overflow * overflow / 3);
    case PenaltyKind::kMinCost:
      return T(cost * flow + model.big_m_as<T>() * overflow * overflow / 2);
  }
  return T(0);
}

inline double penalty_value(const PenaltyModel& model, const Instance& instance, ArcIndex a,
                            double flow) {
  const Arc& arc = instance.arc(a);
  return penalty_value<double>(model, flow, arc.capacity, arc.cost);
}

/// Per-arc weights h(f_a) for an aggregate flow.
inline std::vector<double> penalty_weights(const PenaltyModel& model, const Instance& instance,
                                           const AggregateFlow& agg) {
  std::vector<double> weights(instance.num_arcs());
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    weights[a] = penalty_value(model, instance, a, agg[a]);
  }
  return weights;
}

struct ObjectiveValue {
  double z = 0.0;
  std::vector<double> per_arc;
};

/// z = sum over arcs of the integral of h, accumulated in ascending arc order.
inline ObjectiveValue objective(const PenaltyModel& model, const Instance& instance,
                                const AggregateFlow& agg) {
  ObjectiveValue value;
  value.per_arc.resize(instance.num_arcs());
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    const Arc& arc = instance.arc(a);
    value.per_arc[a] = arc_integral<double>(model, agg[a], arc.capacity, arc.cost);
    value.z += value.per_arc[a];
  }
  return value;
}

/// Largest (f_a - u_a)^+ over all arcs, with the arc attaining it.
struct Overflow {
  double amount = 0.0;
  ArcIndex arc = 0;
};

inline Overflow max_overflow(const Instance& instance, const AggregateFlow& agg) {
  Overflow worst;
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    const double over = agg[a] - instance.arc(a).capacity;
    if (over > worst.amount) {
      worst.amount = over;
      worst.arc = a;
    }
  }
  return worst;
}

}  // namespace eqflow
