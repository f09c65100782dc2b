#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.

#include "eqflow/eqflow.hpp"
#include "eqflow/io.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace eqflow::cli {

inline constexpr int kExitFeasible = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitUndecided = 2;
inline constexpr int kExitInputError = 3;

struct SolveOptions {
  std::string instance_path;
  std::string penalty = "feasibility";
  std::string big_m;
  std::string trace_path;
  std::string report_path;
  bool timing = false;
  SolverParams params;
};

inline PenaltyModel make_model(const SolveOptions& options) {
  if (options.penalty == "feasibility") return PenaltyModel::feasibility();
  if (options.penalty == "quadratic") return PenaltyModel::generalized(Growth::kQuadratic);
  if (options.big_m.empty()) throw io::InputError("--big-m: required with --penalty mincost");
  Rational m;
  try {
    m = parse_rational(options.big_m);
  } catch (const std::invalid_argument& e) {
    throw io::InputError(std::string("--big-m: ") + e.what());
  }
  if (m <= 0) throw io::InputError("--big-m: must be positive");
  return PenaltyModel::min_cost(m);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::InputError(path + ": cannot open for writing");
  out << text;
}

inline int cmd_solve(const SolveOptions& options, std::ostream& out) {
  const Instance instance = io::read_instance(options.instance_path);
  const PenaltyModel model = make_model(options);
  try {
    options.params.validate();
  } catch (const std::invalid_argument& e) {
    throw io::InputError(e.what());
  }

  std::optional<std::ofstream> trace;
  if (!options.trace_path.empty()) {
    trace.emplace(options.trace_path, std::ios::binary);
    if (!*trace) throw io::InputError(options.trace_path + ": cannot open for writing");
    *trace << io::kTraceHeader << '\n';
  }
  const auto started = std::chrono::steady_clock::now();
  const SolveResult result = fw_solve(instance, model, options.params, [&](const IterationRecord& r) {
    if (trace) *trace << io::trace_line(r) << '\n';
  });
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const io::Json report = io::solve_report(instance, model, options.params, result,
                                           options.timing ? std::optional<double>(seconds) : std::nullopt);
  if (!options.report_path.empty()) write_text(options.report_path, report.dump(2) + "\n");

  out << "verdict: " << to_string(result.verdict) << " (" << to_string(result.reason) << ")\n"
      << "iterations: " << result.iterations << "\n"
      << "objective: " << format_decimal(result.objective) << "\n"
      << "lower bound: " << format_decimal(result.best_lower_bound) << "\n"
      << "max overflow: " << format_decimal(result.max_overflow) << "\n";
  if (model.kind == PenaltyKind::kMinCost) {
    out << "linear cost: " << format_decimal(result.linear_cost) << "\n";
    if (result.overflow_bound) out << "overflow bound: " << format_decimal(*result.overflow_bound) << "\n";
  }
  if (result.certificate) {
    out << "certificate: " << to_string(result.certificate->lhs) << " > "
        << to_string(result.certificate->rhs) << "\n";
  }
  return io::exit_code(result.verdict);
}

inline int cmd_check_flow(const std::string& instance_path, const std::string& flow_path,
                          double tol, std::ostream& out) {
  const Instance instance = io::read_instance(instance_path);
  const PseudoFlow flow = io::to_double(io::parse_flow(instance, io::read_json_file(flow_path)));
  bool ok = true;

  for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
    for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
      if (flow[k][a] < 0.0) {
        ok = false;
        out << "negative flow on arc " << instance.arc_name(a) << " for commodity "
            << instance.commodity_name(k) << ": " << format_decimal(flow[k][a]) << "\n";
      }
    }
  }
  const auto balance = check_conservation(instance, flow, tol);
  if (!balance.within_tolerance) {
    ok = false;
    out << "conservation violated for commodity " << instance.commodity_name(balance.commodity)
        << " at node " << instance.node_name(balance.node) << " by "
        << format_decimal(balance.max_violation) << "\n";
  } else {
    out << "conservation holds (max violation " << format_decimal(balance.max_violation) << ")\n";
  }

  const AggregateFlow agg = aggregate(instance, flow);
  for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
    const double over = agg[a] - instance.arc(a).capacity;
    if (over > tol) {
      ok = false;
      out << "capacity exceeded on arc " << instance.arc_name(a) << " by " << format_decimal(over)
          << "\n";
    }
  }

  const PenaltyModel model = PenaltyModel::feasibility();
  const EquilibriumReport eq = verify_equilibrium(instance, model, flow, tol);
  out << "classification: " << to_string(model, eq.classification) << "\n";
  if (eq.is_equilibrium) {
    out << "equilibrium: yes (max used-arc reduced cost "
        << format_decimal(eq.max_used_reduced_cost) << ")\n";
  } else {
    out << "not an equilibrium: max used-arc reduced cost "
        << format_decimal(eq.max_used_reduced_cost) << "\n";
  }
  for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
    out << "commodity " << instance.commodity_name(k) << ": shortest path length "
        << format_decimal(eq.per_commodity[k].path_length) << "\n";
  }
  if (balance.within_tolerance) {
    try {
      const PathDecomposition paths = decompose_paths(instance, flow, std::max(tol, 1e-9));
      const auto lengths = path_lengths(paths, eq.weights);
      for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
        for (std::size_t p = 0; p < paths.per_commodity[k].paths.size(); ++p) {
          const auto& path = paths.per_commodity[k].paths[p];
          out << "  path";
          for (ArcIndex a : path.arcs) out << ' ' << instance.arc_name(a);
          out << ": flow " << format_decimal(path.flow) << ", length "
              << format_decimal(lengths[k][p]) << "\n";
        }
      }
    } catch (const DecompositionError& e) {
      out << e.what() << "\n";
    }
  }
  out << (ok ? "flow is feasible\n" : "flow is not feasible\n");
  return ok ? 0 : 1;
}

inline int cmd_verify_cert(const std::string& instance_path, const std::string& cert_path,
                           std::ostream& out) {
  const Instance instance = io::read_instance(instance_path);
  const CutCertificate claimed = io::parse_certificate(instance, io::read_json_file(cert_path));
  const CutCertificate cert = evaluate_cut(instance, claimed.weights);
  if (cert.proves_infeasible()) {
    out << to_string(cert.lhs) << " > " << to_string(cert.rhs) << "\n"
        << "certificate proves infeasibility\n";
    return 0;
  }
  out << to_string(cert.lhs) << " ≤ " << to_string(cert.rhs) << "\n"
      << "certificate does not prove infeasibility\n";
  return 1;
}

inline int cmd_oracle(const std::string& instance_path, std::ostream& out) {
  const Instance instance = io::read_instance(instance_path);
  const oracle::OracleVerdict verdict = oracle::oracle_feasible(instance);
  out << (verdict.feasible ? "feasible" : "infeasible") << "\n";
  if (verdict.witness) {
    for (CommodityIndex k = 0; k < instance.num_commodities(); ++k) {
      for (ArcIndex a = 0; a < instance.num_arcs(); ++a) {
        const Rational& v = (*verdict.witness)[k][a];
        if (v != 0) {
          out << "  " << instance.commodity_name(k) << " " << instance.arc_name(a) << " "
              << to_string(v) << "\n";
        }
      }
    }
  }
  return verdict.feasible ? 0 : 1;
}

/// Entry point shared by the executable and the tests. Returns the process
/// exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-commodity flow feasibility by penalty equilibrium"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run Frank-Wolfe and report a verdict");
  solve_cmd->add_option("instance", solve.instance_path, "Instance JSON file")->required();
  solve_cmd->add_option("--penalty", solve.penalty, "Penalty model")
      ->check(CLI::IsMember({"feasibility", "quadratic", "mincost"}));
  solve_cmd->add_option("--big-m", solve.big_m, "Overflow price for --penalty mincost (decimal or p/q)");
  solve_cmd->add_option("--max-iters", solve.params.max_iters, "Iteration limit");
  solve_cmd->add_option("--rel-gap", solve.params.rel_gap, "Relative duality gap to stop at");
  solve_cmd->add_option("--feas-tol", solve.params.feas_tol, "Absolute per-arc overflow accepted as feasible");
  solve_cmd->add_option("--trace", solve.trace_path, "Write one line per iteration to this file");
  solve_cmd->add_option("--report", solve.report_path, "Write the JSON report to this file");
  solve_cmd->add_flag("--timing", solve.timing, "Include wall time in the report");

  std::string instance_path;
  std::string flow_path;
  double tol = 1e-9;
  auto* check_cmd = app.add_subcommand("check-flow", "Check a flow for conservation, capacity and equilibrium");
  check_cmd->add_option("instance", instance_path, "Instance JSON file")->required();
  check_cmd->add_option("flow", flow_path, "Flow JSON file")->required();
  check_cmd->add_option("--tol", tol, "Absolute tolerance")->check(CLI::NonNegativeNumber);

  std::string cert_path;
  auto* verify_cmd = app.add_subcommand("verify-cert", "Verify a cut certificate exactly");
  verify_cmd->add_option("instance", instance_path, "Instance JSON file")->required();
  verify_cmd->add_option("certificate", cert_path, "Certificate JSON file")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact feasibility of a tiny instance");
  oracle_cmd->add_option("instance", instance_path, "Instance JSON file")->required();
  oracle_cmd->group("");

  std::uint64_t seed = 0;
  auto* gen_cmd = app.add_subcommand("gen", "Print a generated tiny instance");
  gen_cmd->add_option("seed", seed, "Generator seed")->required();
  gen_cmd->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*check_cmd) return cmd_check_flow(instance_path, flow_path, tol, out);
    if (*verify_cmd) return cmd_verify_cert(instance_path, cert_path, out);
    if (*oracle_cmd) return cmd_oracle(instance_path, out);
    if (*gen_cmd) {
      out << io::instance_to_json(oracle::gen_instance(seed)).dump(2) << "\n";
      return 0;
    }
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InstanceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NegativeWeightError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const oracle::TooLargeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace eqflow::cli
