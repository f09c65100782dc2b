#pragma once

#include "eqflow/flow.hpp"
#include "eqflow/instance.hpp"
#include "eqflow/penalty.hpp"
#include "eqflow/rational.hpp"
#include "eqflow/shortest_path.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace eqflow {

/// Nonnegative arc weights mu together with both sides of the cut condition
///   lhs = sum_k l^mu(s_k, t_k) d_k,   rhs = sum_a mu_a u_a.
/// Any feasible routing satisfies lhs <= rhs, so lhs > rhs proves the
/// instance infeasible.
struct CutCertificate {
  std::vector<Rational> weights;
  Rational lhs;
  Rational rhs;

  bool proves_infeasible() const { return lhs > rhs; }
};

/// Evaluates both sides exactly for the given weights. Throws
/// NegativeWeightError on a negative weight.
inline CutCertificate evaluate_cut(const Instance& instance, std::vector<Rational> weights) {
  if (weights.size() != instance.num_arcs()) {
    throw std::invalid_argument("certificate has " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(instance.num_arcs()) + " arcs");
  }
  CutCertificate cert;
  cert.weights = std::move(weights);
  for (const auto& [source, members] : instance.commodities_by_source()) {
    const auto tree = shortest_paths<Rational>(instance, cert.weights, source);
    for (CommodityIndex k : members) {
      const Commodity& c = instance.commodity(k);
      cert.lhs += tree.dist[c.sink] * c.exact_demand;
    }
  }
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    cert.rhs += cert.weights[a] * instance.arc(a).exact_capacity;
  }
  return cert;
}

/// Recomputes both sides from the weights alone (the stored lhs/rhs are
/// ignored) and reports whether the cut condition is violated.
inline bool verify_certificate(const Instance& instance, const CutCertificate& cert) {
  return evaluate_cut(instance, cert.weights).proves_infeasible();
}

/// Rescales weights to the primitive nonnegative integer vector on the same
/// ray; both sides scale by the same positive factor.
inline CutCertificate normalize(const CutCertificate& cert) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt common_denominator = 1;
  for (const auto& w : cert.weights) {
    if (w == 0) continue;
    common_denominator = boost::multiprecision::lcm(common_denominator, denominator(w));
  }
  BigInt common_factor = 0;
  for (const auto& w : cert.weights) {
    if (w == 0) continue;
    const Rational scaled = w * common_denominator;
    common_factor = boost::multiprecision::gcd(common_factor, numerator(scaled));
  }
  if (common_factor == 0) return cert;
  const Rational scale(common_denominator, common_factor);
  CutCertificate out;
  out.weights.reserve(cert.weights.size());
  for (const auto& w : cert.weights) out.weights.push_back(w * scale);
  out.lhs = cert.lhs * scale;
  out.rhs = cert.rhs * scale;
  return out;
}

struct CertificateSearch {
  std::optional<CutCertificate> certificate;
  Rational best_margin{0};  // largest lhs - rhs seen over all tried denominators
  BigInt denominator{0};    // denominator that produced the certificate

  bool found() const { return certificate.has_value(); }
};

inline constexpr std::uint64_t kDefaultDenominatorLimit = std::uint64_t{1} << 60;

/// Rounds mu_a = h(f_a) to the nearest multiple of 1/D for
/// D = 2^0, 2^10, 2^20, ... up to `denominator_limit`, evaluates the cut
/// condition exactly for each, and returns the first violating weight vector
/// normalized to primitive integers.
inline CertificateSearch build_certificate(const Instance& instance, const PenaltyModel& model,
                                           const PseudoFlow& flow,
                                           std::uint64_t denominator_limit = kDefaultDenominatorLimit) {
  const AggregateFlow agg = aggregate(instance, flow);
  const std::vector<double> h = penalty_weights(model, instance, agg);
  CertificateSearch search;
  bool first = true;
  for (int shift = 0; shift < 64 && (std::uint64_t{1} << shift) <= denominator_limit; shift += 10) {
    BigInt denominator = 1;
    denominator <<= shift;
    std::vector<Rational> mu;
    mu.reserve(h.size());
    bool any = false;
    for (double value : h) {
      const double scaled = std::round(std::ldexp(value, shift));
      Rational weight = rational_from_double(scaled) / Rational(denominator);
      any = any || weight != 0;
      mu.push_back(std::move(weight));
    }
    CutCertificate cert = evaluate_cut(instance, std::move(mu));
    const Rational margin = cert.lhs - cert.rhs;
    if (first || margin > search.best_margin) search.best_margin = margin;
    first = false;
    if (any && cert.proves_infeasible()) {
      search.certificate = normalize(cert);
      search.denominator = denominator;
      return search;
    }
  }
  return search;
}

}  // namespace eqflow
