#include "deafs/game.hpp"

#include <algorithm>

#include "deafs/errors.hpp"
#include "deafs/parallel.hpp"

namespace deafs {

namespace {

template <typename Fn>
SelectionSolution tagged(const std::string& owner, Fn&& fn) {
  try {
    return fn();
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(owner + ": " + e.what());
  } catch (const SolverError& e) {
    throw SolverError(e.kind(), owner + ": " + e.what());
  }
}

}  // namespace

CrossEfficiencyMatrix cross_efficiency(const Dataset& d, const SelectionConfig& cfg) {
  const int K = d.num_dmus();
  CrossEfficiencyMatrix m;
  m.joint = tagged("joint selection", [&] { return solve_selection(d, cfg, SelectionTarget::joint()); });
  m.individual.resize(static_cast<std::size_t>(K));
  parallel_for(static_cast<std::size_t>(K), [&](std::size_t k) {
    m.individual[k] = tagged("individual selection for DMU " + d.dmu_ids()[k], [&] {
      return solve_selection(d, cfg, SelectionTarget::individual(static_cast<int>(k)));
    });
  });
  m.delta.resize(K, K);
  for (int col = 0; col < K; ++col) {
    const auto& e = m.individual[static_cast<std::size_t>(col)].efficiencies;
    for (int k = 0; k < K; ++k) {
      m.delta(k, col) = e[static_cast<std::size_t>(k)] - m.joint.efficiencies[static_cast<std::size_t>(k)];
    }
  }
  return m;
}

SupportProfile support_profile(const Eigen::MatrixXd& delta, double tol) {
  const auto K = static_cast<int>(delta.rows());
  SupportProfile s;
  s.pi.resize(static_cast<std::size_t>(delta.cols()));
  for (int col = 0; col < delta.cols(); ++col) {
    int count = 0;
    for (int k = 0; k < K; ++k) count += delta(k, col) > tol ? 1 : 0;
    s.pi[static_cast<std::size_t>(col)] = K > 0 ? 100.0 * count / K : 0.0;
    // Integer binning avoids rounding at the 5% edges; 100% lands in the last bin.
    const int bin = K > 0 ? std::min(kSupportBins - 1, (kSupportBins * count) / K) : 0;
    ++s.bins[static_cast<std::size_t>(bin)];
  }
  return s;
}

}  // namespace deafs
