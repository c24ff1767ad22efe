#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "corpus.hpp"
#include "deafs/game.hpp"

using namespace deafs;

TEST(Game, Counterexample2AtTwoOutputsHasNoSupport) {
  const Dataset d = deafs::testing::counterexample2();
  SelectionConfig cfg;
  cfg.p = 2;
  const CrossEfficiencyMatrix m = cross_efficiency(d, cfg);
  EXPECT_LE(m.delta.maxCoeff(), 1e-9);
  const SupportProfile s = support_profile(m);
  for (double pi : s.pi) EXPECT_EQ(pi, 0.0);
  EXPECT_EQ(s.bins[0], 4);
}

TEST(Game, Counterexample2AtOneOutput) {
  const Dataset d = deafs::testing::counterexample2();
  SelectionConfig cfg;
  cfg.p = 1;
  const CrossEfficiencyMatrix m = cross_efficiency(d, cfg);
  // DMU 1 prefers output 3; the joint choice is output 1.
  EXPECT_NEAR(m.delta(0, 0), 0.15, 1e-9);
  EXPECT_NEAR(m.delta(3, 0), -0.75, 1e-9);
  const SupportProfile s = support_profile(m);
  EXPECT_DOUBLE_EQ(s.pi[0], 25.0);
  EXPECT_DOUBLE_EQ(s.pi[1], 0.0);
}

TEST(Game, DiagonalIsNonnegativeAndBinsCountEveryStrategy) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 4; ++trial) {
    const Dataset d = deafs::testing::random_dataset(rng, 5, 1, 4);
    SelectionConfig cfg;
    cfg.p = 2;
    const CrossEfficiencyMatrix m = cross_efficiency(d, cfg);
    for (int k = 0; k < 5; ++k) EXPECT_GE(m.delta(k, k), -1e-6);
    const SupportProfile s = support_profile(m);
    EXPECT_EQ(std::accumulate(s.bins.begin(), s.bins.end(), 0), 5);
  }
}

TEST(Game, SupportBinning) {
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(4, 3);
  delta(0, 1) = 0.5;                 // 25%
  delta.col(2).setConstant(0.1);     // 100%
  const SupportProfile s = support_profile(delta);
  EXPECT_EQ(s.pi, (std::vector<double>{0.0, 25.0, 100.0}));
  EXPECT_EQ(s.bins[0], 1);
  EXPECT_EQ(s.bins[5], 1);
  EXPECT_EQ(s.bins[kSupportBins - 1], 1);
  // Identical strategies support nobody.
  const SupportProfile z = support_profile(Eigen::MatrixXd::Zero(6, 6));
  EXPECT_EQ(z.bins[0], 6);
}
