#pragma once

// Independent ground truth for tiny instances. Deliberately shares nothing
// with the solver beyond the Instance type: feasibility of the arc-flow
// linear system is decided by an exact Phase-I simplex.

#include "eqflow/instance.hpp"
#include "eqflow/rational.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqflow::oracle {

inline constexpr std::size_t kMaxVariables = 24;

class TooLargeError : public std::invalid_argument {
 public:
  explicit TooLargeError(std::size_t variables)
      : std::invalid_argument("TooLarge: " + std::to_string(variables) +
                              " arc-commodity variables exceed the oracle limit of " +
                              std::to_string(kMaxVariables)) {}
};

struct OracleVerdict {
  bool feasible = false;
  // witness[k][a], present iff feasible
  std::optional<std::vector<std::vector<Rational>>> witness;
};

namespace detail {

// Dense tableau: rows = constraints, last column = right-hand side.
class PhaseOne {
 public:
  PhaseOne(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs)
      : m_(rows.size()), n_(rows.empty() ? 0 : rows.front().size()) {
    // columns: structural [0, n), artificial [n, n + m)
    tableau_.assign(m_, std::vector<Rational>(n_ + m_ + 1, Rational(0)));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = rhs[i] < 0;
      for (std::size_t j = 0; j < n_; ++j) {
        tableau_[i][j] = flip ? Rational(-rows[i][j]) : rows[i][j];
      }
      tableau_[i][n_ + i] = 1;
      tableau_[i][n_ + m_] = flip ? Rational(-rhs[i]) : rhs[i];
      basis_[i] = n_ + i;
    }
  }

  // Runs Bland's rule to optimality; returns the structural solution if the
  // artificial objective reaches zero.
  std::optional<std::vector<Rational>> solve() {
    const std::size_t columns = n_ + m_;
    for (;;) {
      // reduced cost of column j for min sum(artificials)
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < columns && !entering; ++j) {
        if (is_basic(j)) continue;
        Rational reduced = j >= n_ ? Rational(1) : Rational(0);
        for (std::size_t i = 0; i < m_; ++i) {
          if (basis_[i] >= n_) reduced -= tableau_[i][j];
        }
        if (reduced < 0) entering = j;
      }
      if (!entering) break;

      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        const Rational& coefficient = tableau_[i][*entering];
        if (coefficient <= 0) continue;
        const Rational ratio = tableau_[i][columns] / coefficient;
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[*leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (!leaving) break;  // unbounded cannot happen: objective is bounded below by 0
      pivot(*leaving, *entering);
    }

    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_ && tableau_[i][columns] != 0) return std::nullopt;
    }
    std::vector<Rational> x(n_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = tableau_[i][columns];
    }
    return x;
  }

 private:
  bool is_basic(std::size_t j) const {
    for (std::size_t b : basis_) {
      if (b == j) return true;
    }
    return false;
  }

  void pivot(std::size_t row, std::size_t col) {
    const Rational p = tableau_[row][col];
    for (auto& v : tableau_[row]) v /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || tableau_[i][col] == 0) continue;
      const Rational factor = tableau_[i][col];
      for (std::size_t j = 0; j < tableau_[i].size(); ++j) {
        if (tableau_[row][j] != 0) tableau_[i][j] -= factor * tableau_[row][j];
      }
    }
    basis_[row] = col;
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<Rational>> tableau_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Decides whether some nonnegative arc flow meets every demand within the
/// capacities, exactly over the rationals. Throws TooLargeError when
/// |A| * |K| exceeds kMaxVariables.
inline OracleVerdict oracle_feasible(const Instance& instance) {
  const std::size_t arcs = instance.num_arcs();
  const std::size_t commodities = instance.num_commodities();
  const std::size_t variables = arcs * commodities;
  if (variables > kMaxVariables) throw TooLargeError(variables);

  // structural columns: x[k][a] at k * arcs + a, then one slack per arc
  const std::size_t columns = variables + arcs;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (CommodityIndex k = 0; k < commodities; ++k) {
    const Commodity& c = instance.commodity(k);
    for (NodeIndex v = 0; v < instance.num_nodes(); ++v) {
      std::vector<Rational> row(columns, Rational(0));
      for (ArcIndex a = 0; a < arcs; ++a) {
        if (instance.arc(a).tail == v) row[k * arcs + a] += 1;
        if (instance.arc(a).head == v) row[k * arcs + a] -= 1;
      }
      rows.push_back(std::move(row));
      rhs.push_back(v == c.source ? c.exact_demand
                                  : v == c.sink ? Rational(-c.exact_demand) : Rational(0));
    }
  }
  for (ArcIndex a = 0; a < arcs; ++a) {
    std::vector<Rational> row(columns, Rational(0));
    for (CommodityIndex k = 0; k < commodities; ++k) row[k * arcs + a] = 1;
    row[variables + a] = 1;
    rows.push_back(std::move(row));
    rhs.push_back(instance.arc(a).exact_capacity);
  }

  OracleVerdict verdict;
  const auto solution = detail::PhaseOne(std::move(rows), std::move(rhs)).solve();
  if (!solution) return verdict;
  verdict.feasible = true;
  std::vector<std::vector<Rational>> witness(commodities, std::vector<Rational>(arcs));
  for (CommodityIndex k = 0; k < commodities; ++k) {
    for (ArcIndex a = 0; a < arcs; ++a) witness[k][a] = (*solution)[k * arcs + a];
  }
  verdict.witness = std::move(witness);
  return verdict;
}

struct GeneratorParams {
  std::size_t max_nodes = 5;
  std::size_t max_arcs = 8;
  std::size_t max_commodities = 2;
  std::uint64_t max_capacity = 4;
  std::uint64_t max_demand = 3;
};

/// Deterministic tiny instance for `seed`. Algorithm, driven by
/// std::mt19937_64(seed) (whose output sequence is fixed by the standard)
/// with draws reduced modulo the range:
///   1. node count in [3, max_nodes], commodity count in [1, max_commodities];
///   2. per commodity, distinct endpoints s != t and a guaranteed s-t path
///      through at most one random intermediate node, reusing existing arcs;
///   3. random extra arcs (no self-loops) up to a drawn total <= max_arcs;
///   4. capacities in [0, max_capacity] (zero with probability 1/8, else
///      uniform in [1, max_capacity]), demands in [1, max_demand].
/// Reachability holds by construction, so validation always passes.
inline Instance gen_instance(std::uint64_t seed, const GeneratorParams& params = {}) {
  if (params.max_nodes < 3 || params.max_arcs < 2 || params.max_commodities < 1 ||
      params.max_arcs * params.max_commodities > kMaxVariables || params.max_capacity < 1 ||
      params.max_demand < 1) {
    throw std::invalid_argument("generator size parameters outside the oracle guard");
  }
  std::mt19937_64 rng(seed);
  const auto draw = [&rng](std::uint64_t bound) { return rng() % bound; };  // [0, bound)

  const std::size_t nodes = 3 + draw(params.max_nodes - 2);
  const std::size_t commodities = 1 + draw(params.max_commodities);
  const std::size_t arc_target = std::min<std::size_t>(params.max_arcs, nodes + draw(4));

  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  const auto has_arc = [&](std::size_t t, std::size_t h) {
    for (const auto& [x, y] : arcs) {
      if (x == t && y == h) return true;
    }
    return false;
  };
  const auto add_arc = [&](std::size_t t, std::size_t h) {
    if (!has_arc(t, h) && arcs.size() < params.max_arcs) arcs.emplace_back(t, h);
  };

  RawInstance raw;
  for (std::size_t v = 0; v < nodes; ++v) raw.nodes.push_back("n" + std::to_string(v));

  std::vector<std::pair<std::size_t, std::size_t>> endpoints;
  for (std::size_t k = 0; k < commodities; ++k) {
    const std::size_t s = draw(nodes);
    const std::size_t t = (s + 1 + draw(nodes - 1)) % nodes;
    endpoints.emplace_back(s, t);
    // at most two arcs per commodity; a skipped add means the arc exists
    if (draw(2) == 0 && params.max_arcs >= 2 * params.max_commodities) {
      std::size_t mid = draw(nodes);
      while (mid == s || mid == t) mid = (mid + 1) % nodes;
      add_arc(s, mid);
      add_arc(mid, t);
    } else {
      add_arc(s, t);
    }
  }
  while (arcs.size() < arc_target) {
    const std::size_t t = draw(nodes);
    const std::size_t h = (t + 1 + draw(nodes - 1)) % nodes;
    if (!has_arc(t, h)) arcs.emplace_back(t, h);
  }

  for (const auto& [t, h] : arcs) {
    const std::uint64_t capacity = draw(8) == 0 ? 0 : 1 + draw(params.max_capacity);
    raw.arcs.push_back({"a" + std::to_string(raw.arcs.size()), raw.nodes[t], raw.nodes[h],
                        Rational(capacity), Rational(0)});
  }
  for (std::size_t k = 0; k < commodities; ++k) {
    raw.commodities.push_back({"k" + std::to_string(k), raw.nodes[endpoints[k].first],
                               raw.nodes[endpoints[k].second],
                               Rational(1 + draw(params.max_demand))});
  }
  return validate_instance(raw);
}

}  // namespace eqflow::oracle
