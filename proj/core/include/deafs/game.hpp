#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "deafs/selection.hpp"

namespace deafs {

/// delta(k, k') = E^(k)(z^(k')(p)) - E^(k)(z(p)).
struct CrossEfficiencyMatrix {
  Eigen::MatrixXd delta;
  SelectionSolution joint;
  std::vector<SelectionSolution> individual;  // indexed by k'
};

/// Solves the joint problem and every individual problem under cfg.
CrossEfficiencyMatrix cross_efficiency(const Dataset& d, const SelectionConfig& cfg);

inline constexpr int kSupportBins = 20;

struct SupportProfile {
  /// pi[k'] = percentage of DMUs k with delta(k, k') > tol.
  std::vector<double> pi;
  /// Counts over [0,5), [5,10), ..., [95,100].
  std::array<int, kSupportBins> bins{};
};

SupportProfile support_profile(const Eigen::MatrixXd& delta, double tol = 1e-6);
inline SupportProfile support_profile(const CrossEfficiencyMatrix& m, double tol = 1e-6) {
  return support_profile(m.delta, tol);
}

}  // namespace deafs
