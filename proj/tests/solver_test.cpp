#include "eqflow/solver.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace eqflow {
namespace {

TEST(Initialize, SingleArcCarriesDemand) {
  const Instance inst = testing::instance_a();
  EXPECT_EQ(initialize(inst)[0], (std::vector<double>{3.0}));
}

TEST(Initialize, ParallelTieGoesToFirstArc) {
  EXPECT_EQ(initialize(testing::diamond())[0], (std::vector<double>{3.0, 0.0}));
}

TEST(Initialize, FewestHopsWins) {
  const PseudoFlow f = initialize(testing::bottleneck(3));
  EXPECT_EQ(f[0], (std::vector<double>{0, 0, 0, 0, 0, 2}));  // bypass, one hop
  EXPECT_EQ(f[1], (std::vector<double>{0, 2, 2, 0, 2, 0}));
}

TEST(LowerBound, OverloadedSingleArc) {
  // z = 1/2, h f = 3, AON value 3
  const Instance inst = testing::instance_b();
  const PseudoFlow f = initialize(inst);
  EXPECT_DOUBLE_EQ(lower_bound(inst, PenaltyModel::feasibility(), f, 3.0), 0.5);
}

TEST(LowerBound, DiamondStart) {
  // z = 1/2, h = (1, 0), h f = 3, AON value 0
  const Instance inst = testing::diamond();
  EXPECT_DOUBLE_EQ(lower_bound(inst, PenaltyModel::feasibility(), initialize(inst), 0.0), -2.5);
}

TEST(LowerBound, FeasibleFlowIsZero) {
  const Instance inst = testing::instance_a();
  EXPECT_EQ(lower_bound(inst, PenaltyModel::feasibility(), initialize(inst), 0.0), 0.0);
}

TEST(FwSolve, InstanceAFeasibleWithoutMoving) {
  const SolveResult r = fw_solve(testing::instance_a(), PenaltyModel::feasibility());
  EXPECT_EQ(r.verdict, Verdict::kFeasible);
  EXPECT_EQ(r.reason, StopReason::kWithinCapacity);
  EXPECT_EQ(r.iterations, 0u);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].n, 1u);
  EXPECT_EQ(r.flow[0][0], 3.0);
  EXPECT_TRUE(r.equilibrium.is_equilibrium);
}

TEST(FwSolve, InstanceBCertifiedInfeasible) {
  const SolveResult r = fw_solve(testing::instance_b(), PenaltyModel::feasibility());
  EXPECT_EQ(r.verdict, Verdict::kInfeasible);
  EXPECT_EQ(r.reason, StopReason::kCertified);
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_DOUBLE_EQ(r.trace[0].lower_bound, 0.5);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_EQ(r.certificate->lhs, Rational(3));
  EXPECT_EQ(r.certificate->rhs, Rational(2));
}

TEST(FwSolve, DiamondOneMove) {
  const SolveResult r = fw_solve(testing::diamond(), PenaltyModel::feasibility());
  EXPECT_EQ(r.verdict, Verdict::kFeasible);
  EXPECT_EQ(r.iterations, 1u);
  ASSERT_EQ(r.trace.size(), 2u);
  EXPECT_NEAR(r.trace[0].alpha, 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.trace[0].z, 0.5);
  EXPECT_DOUBLE_EQ(r.trace[0].lower_bound, -2.5);
  EXPECT_EQ(r.trace[1].alpha, 0.0);
  EXPECT_NEAR(r.flow[0][0], 2.0, 1e-12);
  EXPECT_NEAR(r.flow[0][1], 1.0, 1e-12);
}

TEST(FwSolve, TightBottleneckFeasible) {
  const SolveResult r = fw_solve(testing::bottleneck(3), PenaltyModel::feasibility());
  EXPECT_EQ(r.verdict, Verdict::kFeasible);
  EXPECT_LE(r.max_overflow, 1e-6);
  EXPECT_NEAR(r.trace[0].alpha, 0.5, 1e-15);
}

TEST(FwSolve, BottleneckCertifiedInfeasible) {
  const Instance inst = testing::bottleneck(2);
  const SolveResult r = fw_solve(inst, PenaltyModel::feasibility());
  EXPECT_EQ(r.verdict, Verdict::kInfeasible);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_EQ(r.certificate->lhs, Rational(4));
  EXPECT_EQ(r.certificate->rhs, Rational(3));
  EXPECT_EQ(r.certificate->weights[testing::kSharedArc], Rational(1));
  EXPECT_EQ(r.certificate->weights[testing::kBypassArc], Rational(1));
  EXPECT_TRUE(verify_certificate(inst, *r.certificate));
}

TEST(FwSolve, QuadraticModelDecidesToo) {
  EXPECT_EQ(fw_solve(testing::diamond(), PenaltyModel::generalized(Growth::kQuadratic)).verdict,
            Verdict::kFeasible);
  EXPECT_EQ(fw_solve(testing::instance_b(), PenaltyModel::generalized(Growth::kQuadratic)).verdict,
            Verdict::kInfeasible);
}

TEST(FwSolve, MinCostPairNearOptimal) {
  // optimum pushes 1/M over the cheap arc: cost 3 - 1/M, overflow 1/M
  const SolveResult r = fw_solve(testing::min_cost_pair(), PenaltyModel::min_cost(1000));
  EXPECT_EQ(r.verdict, Verdict::kUndecided);
  EXPECT_EQ(r.reason, StopReason::kGapClosed);
  EXPECT_NEAR(r.linear_cost, 3.0 - 1.0 / 1000, 1e-6);
  EXPECT_LE(r.max_overflow, 1.0 / 1000 + 1e-6);
  ASSERT_TRUE(r.overflow_bound.has_value());
  EXPECT_GE(*r.overflow_bound + 1e-9, r.max_overflow);
}

TEST(FwSolve, IterationLimitIsUndecided) {
  // infeasible but no certificate search for the min-cost model, so it runs out
  SolverParams params;
  params.max_iters = 3;
  params.rel_gap = 1e-300;
  const SolveResult r = fw_solve(testing::diamond(), PenaltyModel::min_cost(5), params);
  EXPECT_EQ(r.verdict, Verdict::kUndecided);
  EXPECT_LE(r.iterations, 3u);
}

TEST(FwSolve, ObserverSeesEveryRow) {
  std::vector<IterationRecord> seen;
  const SolveResult r = fw_solve(testing::bottleneck(3), PenaltyModel::feasibility(), {},
                                 [&](const IterationRecord& rec) { seen.push_back(rec); });
  EXPECT_EQ(seen, r.trace);
  EXPECT_EQ(r.trace.size(), r.iterations + 1);
}

TEST(SolverParams, RejectsNonsense) {
  SolverParams p;
  p.rel_gap = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.max_iters = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

SolverParams short_run() {
  SolverParams p;
  p.max_iters = 200;
  return p;
}

TEST(SolverProperties, ObjectiveNeverIncreases) {
  for (const auto& model : {PenaltyModel::feasibility(), PenaltyModel::generalized(Growth::kQuadratic),
                            PenaltyModel::min_cost(20)}) {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
      const SolveResult r = fw_solve(testing::random_instance(seed), model, short_run());
      for (std::size_t i = 1; i < r.trace.size(); ++i) {
        EXPECT_LE(r.trace[i].z, r.trace[i - 1].z + 1e-12 * std::max(1.0, r.trace[i - 1].z))
            << model.name() << " seed " << seed << " row " << i;
      }
    }
  }
}

TEST(SolverProperties, LowerBoundNeverExceedsObjective) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const SolveResult r = fw_solve(testing::random_instance(seed), PenaltyModel::feasibility(), short_run());
    double min_z = r.trace.front().z;
    for (const auto& row : r.trace) {
      EXPECT_LE(row.lower_bound, row.z + 1e-9);
      min_z = std::min(min_z, row.z);
    }
    EXPECT_LE(r.best_lower_bound, min_z + 1e-9) << "seed " << seed;
  }
}

TEST(SolverProperties, IteratesConserveFlow) {
  std::mt19937_64 rng(51);
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const Instance inst = testing::random_instance(seed);
    SolverParams p;
    p.max_iters = 1 + rng() % 40;
    const SolveResult r = fw_solve(inst, PenaltyModel::feasibility(), p);
    EXPECT_TRUE(check_conservation(inst, r.flow, 1e-9).within_tolerance) << "seed " << seed;
    for (const auto& row : r.flow.per_commodity) {
      for (double x : row) EXPECT_GE(x, 0.0);
    }
  }
}

TEST(SolverProperties, Deterministic) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = testing::random_instance(seed);
    const SolveResult a = fw_solve(inst, PenaltyModel::feasibility(), short_run());
    const SolveResult b = fw_solve(inst, PenaltyModel::feasibility(), short_run());
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.flow, b.flow);
    EXPECT_EQ(a.verdict, b.verdict);
  }
}

}  // namespace
}  // namespace eqflow
