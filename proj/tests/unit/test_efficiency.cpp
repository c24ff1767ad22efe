#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "deafs/efficiency.hpp"
#include "deafs/errors.hpp"
#include "deafs/oracle.hpp"
#include "deafs/solver.hpp"

using namespace deafs;
using deafs::testing::counterexample1;
using deafs::testing::counterexample2;

namespace {

// Envelopment form: min theta s.t. sum lambda_j x^(j) <= theta x^(k),
// sum lambda_j y^(j) >= y^(k), lambda >= 0. Its value equals the multiplier
// model's by LP duality.
double envelopment(const Dataset& d, int k, const ActiveSet& a) {
  milp::MilpModel m(milp::Sense::Minimize);
  const int theta = m.add_continuous("theta", -milp::kInfinity, milp::kInfinity, 1.0);
  std::vector<int> lambda;
  for (int j = 0; j < d.num_dmus(); ++j) lambda.push_back(m.add_continuous("l" + std::to_string(j), 0, milp::kInfinity));
  for (int i : a.inputs) {
    std::vector<milp::LinearTerm> t{{theta, -d.input(k, i)}};
    for (int j = 0; j < d.num_dmus(); ++j) t.push_back({lambda[static_cast<std::size_t>(j)], d.input(j, i)});
    m.add_constraint("in" + std::to_string(i), t, milp::Relation::LessEqual, 0.0);
  }
  for (int o : a.outputs) {
    std::vector<milp::LinearTerm> t;
    for (int j = 0; j < d.num_dmus(); ++j) t.push_back({lambda[static_cast<std::size_t>(j)], d.output(j, o)});
    m.add_constraint("out" + std::to_string(o), t, milp::Relation::GreaterEqual, d.output(k, o));
  }
  const milp::SolveOutcome r = milp::solve_lp(m);
  EXPECT_EQ(r.status, milp::SolveStatus::Optimal);
  return r.objective;
}

}  // namespace

TEST(Efficiency, SingleOutputOfCounterexample1EqualsTheOutput) {
  const Dataset d = counterexample1();
  const auto e = all_efficiencies(d, ActiveSet::with_outputs(d, {0}));
  const double want[] = {0.6, 0.7, 0.8, 0.9, 1.0};
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(e[static_cast<std::size_t>(k)], want[k], 1e-9);
}

TEST(Efficiency, OutputsTwoAndThreeMakeCounterexample2Efficient) {
  const Dataset d = counterexample2();
  for (double e : all_efficiencies(d, ActiveSet::with_outputs(d, {1, 2}))) EXPECT_NEAR(e, 1.0, 1e-9);
}

TEST(Efficiency, SingleDmuIsEfficient) {
  const Dataset d = deafs::testing::make_dataset(Eigen::MatrixXd::Constant(1, 1, 2.0), Eigen::MatrixXd::Constant(1, 2, 3.0));
  EXPECT_NEAR(efficiency(d, 0, ActiveSet::all(d)), 1.0, 1e-12);
}

TEST(Efficiency, EmptyOutputSetIsZero) {
  const Dataset d = counterexample2();
  EXPECT_EQ(efficiency(d, 0, ActiveSet::with_outputs(d, {})), 0.0);
}

TEST(Efficiency, AgreesWithEnvelopmentForm) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = deafs::testing::random_dataset(rng, 7, 2, 4);
    const ActiveSet a = ActiveSet::all(d);
    for (int k = 0; k < d.num_dmus(); ++k) {
      EXPECT_NEAR(efficiency(d, k, a), envelopment(d, k, a), 1e-8) << "trial " << trial << " k " << k;
    }
  }
}

TEST(Efficiency, SingleInputSingleOutputClosedForm) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = deafs::testing::random_dataset(rng, 6, 1, 3);
    for (int o = 0; o < 3; ++o) {
      double best = 0.0;
      for (int j = 0; j < 6; ++j) best = std::max(best, d.output(j, o) / d.input(j, 0));
      for (int k = 0; k < 6; ++k) {
        EXPECT_NEAR(efficiency(d, k, ActiveSet::with_outputs(d, {o})), d.output(k, o) / d.input(k, 0) / best, 1e-9);
      }
    }
  }
}

TEST(Efficiency, InvariantToColumnScaling) {
  std::mt19937_64 rng(23);
  const Dataset d = deafs::testing::random_dataset(rng, 6, 2, 3);
  Eigen::MatrixXd x = d.inputs();
  Eigen::MatrixXd y = d.outputs();
  x.col(1) *= 1000.0;
  y.col(0) *= 0.001;
  y.col(2) *= 37.0;
  const Dataset s = deafs::testing::make_dataset(x, y);
  const auto e1 = all_efficiencies(d, ActiveSet::all(d));
  const auto e2 = all_efficiencies(s, ActiveSet::all(s));
  for (std::size_t k = 0; k < e1.size(); ++k) EXPECT_NEAR(e1[k], e2[k], 1e-8);
}

TEST(Efficiency, BoundedByOneAndMonotoneInOutputs) {
  std::mt19937_64 rng(24);
  const Dataset d = deafs::testing::random_dataset(rng, 8, 1, 4);
  std::vector<double> prev(8, 0.0);
  for (int o = 0; o < 4; ++o) {
    std::vector<int> outs;
    for (int t = 0; t <= o; ++t) outs.push_back(t);
    const auto e = all_efficiencies(d, ActiveSet::with_outputs(d, outs));
    EXPECT_NEAR(*std::max_element(e.begin(), e.end()), 1.0, 1e-9);
    for (std::size_t k = 0; k < e.size(); ++k) {
      EXPECT_LE(e[k], 1.0 + 1e-12);
      EXPECT_GE(e[k], prev[k] - 1e-9);
    }
    prev = e;
  }
}

TEST(Efficiency, WeightBounds) {
  const Dataset d = counterexample2();
  const ActiveSet a = ActiveSet::all(d);
  // beta_1 >= 10 violates the frontier row of DMU 4 (y1 = 1).
  EXPECT_FALSE(bounded_efficiency(d, 0, a, {{0, {10.0, milp::kInfinity}}}).has_value());
  // Capping every weight lowers the score of DMU 1, which relies on y3.
  const auto capped = bounded_efficiency(d, 0, a, {{2, {0.0, 0.1}}});
  ASSERT_TRUE(capped.has_value());
  EXPECT_LT(*capped, efficiency(d, 0, a) - 1e-6);
  EXPECT_FALSE(all_bounded_efficiencies(d, a, {{0, {10.0, milp::kInfinity}}}).has_value());
}

TEST(Efficiency, ZeroActiveInputIsNormalizationInfeasible) {
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 1;
  const Dataset d = deafs::testing::make_dataset(x, Eigen::MatrixXd::Ones(2, 1));
  ActiveSet a = ActiveSet::all(d);
  a.inputs = {0};
  try {
    efficiency(d, 0, a);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.kind(), DataErrorKind::NormalizationInfeasible);
  }
}
