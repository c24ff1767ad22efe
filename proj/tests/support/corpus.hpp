#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deafs/dataset.hpp"

namespace deafs::testing {

inline std::vector<std::string> numbered(int n, const std::string& prefix = "") {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back(prefix + std::to_string(i));
  return v;
}

inline Dataset make_dataset(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return Dataset(numbered(static_cast<int>(x.rows())), x, y, numbered(static_cast<int>(x.cols()), "x"),
                 numbered(static_cast<int>(y.cols()), "y"));
}

/// Five DMUs, one unit input, four outputs; the optimal sets are not nested.
inline Dataset counterexample1() {
  const double t = 1.0 / 3.0;
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(5, 1);
  Eigen::MatrixXd y(5, 4);
  y << 0.6, t, t, t,
       0.7, t, t, t,
       0.8, 1, 0, 0,
       0.9, 0, 1, 0,
       1.0, 0, 0, 1;
  return make_dataset(x, y);
}

/// Four DMUs, one unit input, three outputs; greedy selection is suboptimal.
inline Dataset counterexample2() {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(4, 1);
  Eigen::MatrixXd y(4, 3);
  y << 0.85, 0.2, 0.8,
       0.95, 0.4, 0.6,
       0.90, 0.6, 0.4,
       1.00, 0.8, 0.2;
  return make_dataset(x, y);
}

inline Dataset random_dataset(std::mt19937_64& rng, int K, int I, int O, double lo = 0.1, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd x(K, I);
  Eigen::MatrixXd y(K, O);
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < I; ++i) x(k, i) = u(rng);
    for (int o = 0; o < O; ++o) y(k, o) = u(rng);
  }
  return make_dataset(x, y);
}

struct CorpusInstance {
  Dataset data;
  std::vector<double> omega;  // positive weights, one per DMU
};

/// Random instances with K in 3..8, I in 1..2, O in 3..6 and uniform data
/// on [0.1, 1]; identical for identical (count, seed).
inline std::vector<CorpusInstance> oracle_corpus(int count, std::uint64_t seed = 20240611) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> k_dist(3, 8), i_dist(1, 2), o_dist(3, 6);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::vector<CorpusInstance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const int K = k_dist(rng);
    const int I = i_dist(rng);
    const int O = o_dist(rng);
    Dataset d = random_dataset(rng, K, I, O);
    std::vector<double> omega(static_cast<std::size_t>(K));
    for (auto& v : omega) v = w(rng);
    out.push_back({std::move(d), std::move(omega)});
  }
  return out;
}

/// The desk-scale instance: K = 50, O = 30, I = 1, uniform on [0.1, 1].
inline Dataset desk_instance(std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::MatrixXd x(50, 1);
  Eigen::MatrixXd y(50, 30);
  for (int k = 0; k < 50; ++k) {
    x(k, 0) = u(rng);
    for (int o = 0; o < 30; ++o) y(k, o) = u(rng);
  }
  return make_dataset(x, y);
}

}  // namespace deafs::testing
