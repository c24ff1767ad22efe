#include <gtest/gtest.h>

#include "corpus.hpp"
#include "deafs/errors.hpp"
#include "deafs/selection.hpp"

using namespace deafs;
using deafs::testing::counterexample1;
using deafs::testing::counterexample2;

namespace {

SelectionSolution joint(const Dataset& d, SelectionConfig cfg, int p) {
  cfg.p = p;
  return solve_selection(d, cfg, SelectionTarget::joint());
}

using Set = std::vector<int>;

}  // namespace

TEST(Selection, Counterexample1OptimaAreNotNested) {
  const Dataset d = counterexample1();
  const SelectionConfig cfg;
  const auto p1 = joint(d, cfg, 1);
  const auto p2 = joint(d, cfg, 2);
  const auto p3 = joint(d, cfg, 3);
  EXPECT_EQ(p1.selected_outputs, (Set{0}));
  EXPECT_NEAR(p1.objective_value, 0.8, 1e-9);
  EXPECT_NEAR(p2.objective_value, 13.0 / 15.0, 1e-9);
  EXPECT_EQ(p3.selected_outputs, (Set{1, 2, 3}));
  EXPECT_NEAR(p3.objective_value, 1.0, 1e-9);
  for (const auto& s : {p1, p2, p3}) {
    EXPECT_TRUE(s.optimal);
    EXPECT_LE(s.consistency_error, 1e-6);
  }
}

TEST(Selection, Counterexample2JointAverage) {
  const Dataset d = counterexample2();
  const auto p1 = joint(d, {}, 1);
  EXPECT_EQ(p1.selected_outputs, (Set{0}));
  EXPECT_NEAR(p1.objective_value, 0.925, 1e-9);
  const auto p2 = joint(d, {}, 2);
  EXPECT_EQ(p2.selected_outputs, (Set{1, 2}));
  for (double e : p2.efficiencies) EXPECT_NEAR(e, 1.0, 1e-9);
}

TEST(Selection, EveryJointObjectiveOnCounterexample2) {
  const Dataset d = counterexample2();
  SelectionConfig cfg;
  cfg.objective = ObjectiveKind::Quadratic;
  const auto q1 = joint(d, cfg, 1);
  EXPECT_EQ(q1.selected_outputs, (Set{0}));
  EXPECT_NEAR(q1.objective_value, 0.00875, 1e-9);
  EXPECT_NEAR(joint(d, cfg, 2).objective_value, 0.0, 1e-9);

  cfg.objective = ObjectiveKind::Min;
  const auto m1 = joint(d, cfg, 1);
  EXPECT_EQ(m1.selected_outputs, (Set{0}));
  EXPECT_NEAR(m1.objective_value, 0.85, 1e-9);
  EXPECT_NEAR(joint(d, cfg, 2).objective_value, 1.0, 1e-9);

  cfg.objective = ObjectiveKind::Percentile;
  cfg.pi = 50;
  EXPECT_NEAR(joint(d, cfg, 2).objective_value, 1.0, 1e-9);

  cfg.objective = ObjectiveKind::Weighted;
  cfg.weights = {4, 0, 0, 0};
  // Only DMU 1 counts, and it is efficient under output 3 alone.
  const auto w1 = joint(d, cfg, 1);
  EXPECT_EQ(w1.selected_outputs, (Set{2}));
  EXPECT_NEAR(w1.objective_value, 1.0, 1e-9);
}

TEST(Selection, IndividualBestSingleOutput) {
  const Dataset d = counterexample2();
  SelectionConfig cfg;
  cfg.p = 1;
  const Set want_set[] = {{2}, {0}, {0}, {0}};
  const double want_value[] = {1.0, 0.95, 0.9, 1.0};
  for (int k = 0; k < 4; ++k) {
    const auto s = solve_selection(d, cfg, SelectionTarget::individual(k));
    EXPECT_EQ(s.selected_outputs, want_set[k]) << "DMU " << k + 1;
    EXPECT_NEAR(s.objective_value, want_value[k], 1e-9) << "DMU " << k + 1;
    EXPECT_NEAR(s.efficiencies[static_cast<std::size_t>(k)], s.objective_value, 1e-9);
  }
}

TEST(Selection, ConflictPairChangesTheOptimum) {
  const Dataset d = counterexample2();
  SelectionConfig cfg;
  cfg.correlation = CorrelationRule{std::nullopt, {{1, 2}}};
  const auto s = joint(d, cfg, 2);
  EXPECT_EQ(s.selected_outputs, (Set{0, 2}));
  EXPECT_NEAR(s.objective_value, 0.9817073170731707, 1e-9);
}

TEST(Selection, StructurallyInfeasibleConfigurationsThrow) {
  const Dataset d = counterexample1();
  SelectionConfig cfg;
  cfg.cost = CostBudget{{3, 4, 5, 6}, 6};
  EXPECT_THROW(joint(d, cfg, 2), InfeasibleError);
  cfg.cost.reset();
  cfg.correlation = CorrelationRule{std::nullopt, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  EXPECT_THROW(joint(d, cfg, 2), InfeasibleError);
}

TEST(Selection, LexicographicTieBreak) {
  // Two identical outputs: both singletons are optimal.
  Eigen::MatrixXd y(3, 3);
  y << 0.5, 0.5, 0.1, 1.0, 1.0, 0.1, 0.7, 0.7, 1.0;
  const Dataset d = deafs::testing::make_dataset(Eigen::MatrixXd::Ones(3, 1), y);
  SelectionConfig cfg;
  cfg.lex_ties = true;
  cfg.p = 1;
  const auto s = solve_selection(d, cfg, SelectionTarget::individual(1));
  EXPECT_EQ(s.selected_outputs, (Set{0}));
  EXPECT_NEAR(s.objective_value, 1.0, 1e-9);
}

TEST(Selection, SweepIsMonotoneWithMarginals) {
  const Dataset d = counterexample1();
  const auto rows = sweep_p(d, SelectionConfig{}, 1, 4);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    ASSERT_TRUE(rows[t].solution.has_value()) << rows[t].error;
    EXPECT_EQ(rows[t].p, static_cast<int>(t) + 1);
    ASSERT_TRUE(rows[t].summary.has_value());
    EXPECT_NEAR(rows[t].summary->mean, rows[t].solution->objective_value, 1e-9);
    if (t + 1 < rows.size()) {
      ASSERT_TRUE(rows[t].marginal.has_value());
      EXPECT_GE(*rows[t].marginal, -1e-9);
    } else {
      EXPECT_FALSE(rows[t].marginal.has_value());
    }
  }
  EXPECT_NEAR(rows[3].solution->objective_value, 1.0, 1e-9);
}

TEST(Selection, SweepRecordsInfeasibleRows) {
  const Dataset d = counterexample1();
  SelectionConfig cfg;
  cfg.cost = CostBudget{{1, 1, 1, 1}, 2};
  const auto rows = sweep_p(d, cfg, 1, 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[1].solution.has_value());
  EXPECT_FALSE(rows[2].solution.has_value());
  EXPECT_TRUE(rows[2].infeasible);
  EXPECT_FALSE(rows[2].error.empty());
}

TEST(Selection, ObjectiveFromEfficiencies) {
  SelectionConfig cfg;
  const std::vector<double> e{0.2, 1.0, 0.6, 0.8};
  EXPECT_NEAR(objective_from_efficiencies(cfg, SelectionTarget::joint(), e), 0.65, 1e-12);
  EXPECT_NEAR(objective_from_efficiencies(cfg, SelectionTarget::individual(2), e), 0.6, 1e-12);
  cfg.objective = ObjectiveKind::Min;
  EXPECT_NEAR(objective_from_efficiencies(cfg, SelectionTarget::joint(), e), 0.2, 1e-12);
  cfg.objective = ObjectiveKind::Percentile;
  cfg.pi = 75;  // the 3 best must reach lambda
  EXPECT_NEAR(objective_from_efficiencies(cfg, SelectionTarget::joint(), e), 0.6, 1e-12);
  cfg.objective = ObjectiveKind::Quadratic;
  EXPECT_NEAR(objective_from_efficiencies(cfg, SelectionTarget::joint(), e), (0.64 + 0 + 0.16 + 0.04) / 4, 1e-12);
  EXPECT_FALSE(objective_maximizes(cfg, SelectionTarget::joint()));
  EXPECT_TRUE(objective_maximizes(cfg, SelectionTarget::individual(0)));
}
