#pragma once

#include "eqflow/flow.hpp"
#include "eqflow/instance.hpp"
#include "eqflow/penalty.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace eqflow {

/// phi(alpha) = z(f + alpha (y - f)), the objective along the FW segment.
inline double line_objective(const PenaltyModel& model, const Instance& instance,
                             const AggregateFlow& f, const AggregateFlow& y, double alpha) {
  double total = 0.0;
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    const Arc& arc = instance.arc(a);
    const double flow = f[a] + alpha * (y[a] - f[a]);
    total += arc_integral<double>(model, flow, arc.capacity, arc.cost);
  }
  return total;
}

/// phi'(alpha) = sum_a (y_a - f_a) h(f_a + alpha (y_a - f_a)).
inline double line_derivative(const PenaltyModel& model, const Instance& instance,
                              const AggregateFlow& f, const AggregateFlow& y, double alpha) {
  double total = 0.0;
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    const double direction = y[a] - f[a];
    if (direction == 0.0) continue;
    total += direction * penalty_value(model, instance, a, f[a] + alpha * direction);
  }
  return total;
}

namespace detail {

// phi' restricted to one segment between breakpoints: c0 + c1 a + c2 a^2.
struct SegmentPolynomial {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  double operator()(double alpha) const { return c[0] + alpha * (c[1] + alpha * c[2]); }

  // Adds (sign = +1) or removes (sign = -1) the overflow term of one arc.
  void toggle(const PenaltyModel& model, double direction, double excess, double sign) {
    switch (model.kind) {
      case PenaltyKind::kFeasibility:
        c[0] += sign * direction * excess;
        c[1] += sign * direction * direction;
        break;
      case PenaltyKind::kMinCost:
        c[0] += sign * model.big_m * direction * excess;
        c[1] += sign * model.big_m * direction * direction;
        break;
      case PenaltyKind::kQuadratic:
        c[0] += sign * direction * excess * excess;
        c[1] += sign * 2.0 * direction * direction * excess;
        c[2] += sign * direction * direction * direction;
        break;
    }
  }
};

struct Breakpoint {
  double alpha;
  ArcIndex arc;
  bool activates;
};

}  // namespace detail

/// Exact line search over [0, 1]. phi' is continuous and nondecreasing and
/// polynomial between the breakpoints where an arc crosses its capacity, so
/// the breakpoints are swept in order until phi' turns nonnegative and the
/// root is solved on that segment (closed form for piecewise-linear phi',
/// bisection to `tol` for the quadratic variant). Returns the smallest
/// minimizer.
inline double line_search(const PenaltyModel& model, const Instance& instance,
                          const AggregateFlow& f, const AggregateFlow& y, double tol = 1e-12) {
  detail::SegmentPolynomial poly;
  std::vector<detail::Breakpoint> events;
  std::vector<double> excess(instance.num_arcs(), 0.0);

  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    const Arc& arc = instance.arc(a);
    const double direction = y[a] - f[a];
    if (direction == 0.0) continue;
    excess[a] = f[a] - arc.capacity;
    if (model.kind == PenaltyKind::kMinCost) poly.c[0] += direction * arc.cost;
    const double crossing = -excess[a] / direction;
    const bool active_at_start = excess[a] > 0.0 || (excess[a] == 0.0 && direction > 0.0);
    if (active_at_start) poly.toggle(model, direction, excess[a], +1.0);
    if (crossing > 0.0 && crossing < 1.0) {
      events.push_back({crossing, a, direction > 0.0});
    }
  }
  std::sort(events.begin(), events.end(), [](const auto& lhs, const auto& rhs) {
    return lhs.alpha != rhs.alpha ? lhs.alpha < rhs.alpha : lhs.arc < rhs.arc;
  });

  // The expanded quadratic cancels badly near a double root; the direct sum
  // keeps the sign right down to rounding of the flows themselves.
  const auto derivative = [&](double alpha) {
    return model.kind == PenaltyKind::kQuadratic ? line_derivative(model, instance, f, y, alpha)
                                                 : poly(alpha);
  };
  const auto root_in = [&](double lo, double hi) {
    if (derivative(lo) >= 0.0) return lo;
    if (poly.c[2] == 0.0) {
      if (poly.c[1] <= 0.0) return hi;
      return std::clamp(-poly.c[0] / poly.c[1], lo, hi);
    }
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (derivative(mid) >= 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  };

  double lo = 0.0;
  for (const auto& event : events) {
    if (derivative(event.alpha) >= 0.0) return root_in(lo, event.alpha);
    const double direction = y[event.arc] - f[event.arc];
    poly.toggle(model, direction, excess[event.arc], event.activates ? +1.0 : -1.0);
    lo = event.alpha;
  }
  if (derivative(1.0) >= 0.0) return root_in(lo, 1.0);
  return 1.0;
}

}  // namespace eqflow
