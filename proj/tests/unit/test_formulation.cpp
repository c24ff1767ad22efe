#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "deafs/efficiency.hpp"
#include "deafs/formulation.hpp"
#include "deafs/simplex.hpp"
#include "deafs/solver.hpp"

using namespace deafs;
using deafs::testing::counterexample1;
using deafs::testing::counterexample2;

namespace {

// Fixes every selection binary to the given set.
void fix_outputs(SelectionModel& sm, const std::vector<int>& outputs) {
  for (std::size_t o = 0; o < sm.z.size(); ++o) {
    const bool on = std::find(outputs.begin(), outputs.end(), static_cast<int>(o)) != outputs.end();
    sm.model.set_bounds(sm.z[o], on ? 1.0 : 0.0, on ? 1.0 : 0.0);
  }
}

}  // namespace

TEST(Formulation, TightenedBoundsAreReciprocalOutputs) {
  Eigen::MatrixXd y(2, 3);
  y << 0.5, 0.0, 4.0, 1.0, 2.0, 1.0;
  const Dataset d = deafs::testing::make_dataset(Eigen::MatrixXd::Ones(2, 1), y);
  EXPECT_EQ(tightened_output_bounds(d, 0), (std::vector<double>{2.0, 0.0, 0.25}));
  EXPECT_EQ(tightened_output_bounds(d, 1), (std::vector<double>{1.0, 0.5, 1.0}));
}

TEST(Formulation, FrontierBoundsNeverExceedReciprocals) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset d = deafs::testing::random_dataset(rng, 6, 2, 4);
    for (int k = 0; k < 6; ++k) {
      const auto t = tightened_output_bounds(d, k);
      const auto f = frontier_output_bounds(d, k);
      for (std::size_t o = 0; o < t.size(); ++o) {
        EXPECT_LE(f[o], t[o] + 1e-15);
        EXPECT_GT(f[o], 0.0);
      }
    }
  }
  // With a unit input the bound is 1 / max_j y_o^(j).
  const Dataset ce = counterexample2();
  const auto f = frontier_output_bounds(ce, 0);
  EXPECT_DOUBLE_EQ(f[0], 1.0);
  EXPECT_DOUBLE_EQ(f[1], 1.0 / 0.8);
  EXPECT_DOUBLE_EQ(f[2], 1.0 / 0.8);
}

TEST(Formulation, ForcedZeroOutputsNeedEnoughPositiveOutputs) {
  const Dataset d = counterexample1();
  // DMU 3 has outputs (0.8, 1, 0, 0): two positive.
  EXPECT_EQ(forced_zero_outputs(d, 2, 2), (std::vector<bool>{false, false, true, true}));
  EXPECT_EQ(forced_zero_outputs(d, 2, 3), (std::vector<bool>(4, false)));
}

TEST(Formulation, IndividualModelShape) {
  const Dataset d = counterexample2();
  SelectionConfig cfg;
  cfg.p = 2;
  const SelectionModel sm = build_osdea_individual(d, 0, cfg);
  EXPECT_FALSE(sm.joint);
  EXPECT_EQ(sm.z.size(), 3u);
  EXPECT_EQ(sm.beta.size(), 1u);
  // z (3) + alpha (1) + beta (3).
  EXPECT_EQ(sm.model.num_variables(), 7);
  // link (3) + frontier (4) + normalization + cardinality.
  EXPECT_EQ(sm.model.num_constraints(), 9);
  EXPECT_GE(sm.model.find_variable("z_3"), 0);
  EXPECT_GE(sm.model.find_variable("beta_2"), 0);
}

TEST(Formulation, JointModelShape) {
  const Dataset d = counterexample2();
  SelectionConfig cfg;
  cfg.p = 2;
  const SelectionModel sm = build_osdea_joint(d, cfg);
  EXPECT_TRUE(sm.joint);
  EXPECT_EQ(sm.beta.size(), 4u);
  EXPECT_EQ(sm.model.num_variables(), 3 + 4 * (1 + 3));
  EXPECT_EQ(sm.model.num_constraints(), 4 * (3 + 4 + 1) + 1);
  EXPECT_GE(sm.model.find_variable("beta_4_3"), 0);
  EXPECT_GE(sm.model.find_variable("alpha_2_1"), 0);
}

TEST(Formulation, FixedBinariesReproduceDeaEfficiencies) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 8; ++trial) {
    const Dataset d = deafs::testing::random_dataset(rng, 5, 2, 4);
    SelectionConfig cfg;
    cfg.p = 2;
    const std::vector<int> chosen{trial % 4, (trial + 1) % 4};
    SelectionModel sm = build_osdea_joint(d, cfg);
    fix_outputs(sm, chosen);
    const milp::SolveOutcome r = milp::solve_lp(sm.model);
    ASSERT_EQ(r.status, milp::SolveStatus::Optimal);
    const auto e = all_efficiencies(d, ActiveSet::with_outputs(d, chosen));
    double mean = 0.0;
    for (double v : e) mean += v / static_cast<double>(e.size());
    EXPECT_NEAR(r.objective, mean, 1e-8) << "trial " << trial;
    for (std::size_t b = 0; b < sm.efficiency_terms.size(); ++b) {
      double eb = 0.0;
      for (const auto& t : sm.efficiency_terms[b]) eb += t.coef * r.values[static_cast<std::size_t>(t.var)];
      EXPECT_NEAR(eb, e[b], 1e-8);
    }
  }
}

TEST(Formulation, RelaxationBoundsTheSelection) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 8; ++trial) {
    const Dataset d = deafs::testing::random_dataset(rng, 5, 1, 4);
    SelectionConfig cfg;
    cfg.p = 2;
    const SelectionModel sm = build_osdea_joint(d, cfg);
    const double lp = milp::solve_lp(sm.model).objective;
    const double ip = milp::solve_milp(sm.model).objective;
    EXPECT_GE(lp, ip - 1e-9);
  }
}

TEST(Formulation, BigMDoesNotChangeTheOptimum) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 6; ++trial) {
    const Dataset d = deafs::testing::random_dataset(rng, 5, 2, 4);
    SelectionConfig tight;
    tight.p = 2;
    SelectionConfig loose = tight;
    loose.tighten = false;
    loose.big_m = 1e6;
    SelectionConfig small = loose;
    small.big_m = 10.0;
    const double a = milp::solve_milp(build_osdea_joint(d, tight).model).objective;
    const double b = milp::solve_milp(build_osdea_joint(d, loose).model).objective;
    const double c = milp::solve_milp(build_osdea_joint(d, small).model).objective;
    EXPECT_NEAR(a, b, 1e-6);
    EXPECT_NEAR(a, c, 1e-6);
  }
}

TEST(Formulation, ExtensionsAddRows) {
  const Dataset d = counterexample1();
  SelectionConfig cfg;
  cfg.p = 2;
  const int base = build_osdea_joint(d, cfg).model.num_constraints();
  cfg.cost = CostBudget{{1, 1, 1, 1}, 3};
  cfg.clusters = {{{0, 1}, 1, 1}, {{2, 3}, 0, 2}};
  cfg.correlation = CorrelationRule{std::nullopt, {{1, 2}}};
  const SelectionModel sm = build_osdea_joint(d, cfg);
  // cost, cluster_min_1, cluster_max_1 and one conflict; the second
  // cluster's range is slack.
  EXPECT_EQ(sm.model.num_constraints(), base + 4);
  EXPECT_GE(sm.model.find_variable("z_4"), 0);
}

TEST(Formulation, WarmResolvesUnderBinaryFixingsMatchColdSolves) {
  // Branch-and-bound re-solves from the parent basis; every re-solve must
  // agree with a solve from scratch.
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 4; ++trial) {
    const Dataset d = deafs::testing::random_dataset(rng, 6, 2, 4);
    SelectionConfig cfg;
    cfg.p = 2;
    cfg.objective = trial % 2 == 0 ? ObjectiveKind::Percentile : ObjectiveKind::Min;
    const milp::MilpModel m = build_osdea_joint(d, cfg).model;
    std::vector<int> binaries;
    for (int j = 0; j < m.num_variables(); ++j) {
      if (m.variable(j).kind == milp::VarKind::Binary) binaries.push_back(j);
    }
    milp::SimplexSolver warm(milp::make_lp(m));
    ASSERT_EQ(warm.solve(), milp::LpStatus::Optimal);
    for (int step = 0; step < 150; ++step) {
      milp::MilpModel cold = m;
      for (int j : binaries) {
        const auto r = rng() % 4;
        const double lo = r == 1 ? 1.0 : 0.0;
        const double hi = r == 0 ? 0.0 : 1.0;
        warm.set_col_bounds(j, lo, hi);
        cold.set_bounds(j, lo, hi);
      }
      const milp::LpStatus st = warm.solve();
      const milp::SolveOutcome want = milp::solve_lp(cold);
      if (want.status == milp::SolveStatus::Infeasible) {
        EXPECT_EQ(st, milp::LpStatus::Infeasible) << "trial " << trial << " step " << step;
      } else {
        ASSERT_EQ(st, milp::LpStatus::Optimal) << "trial " << trial << " step " << step;
        EXPECT_NEAR(-warm.objective(), want.objective, 1e-7) << "trial " << trial << " step " << step;
      }
    }
  }
}
