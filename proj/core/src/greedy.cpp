#include "deafs/greedy.hpp"

#include <algorithm>
#include <cmath>

#include "deafs/efficiency.hpp"
#include "deafs/errors.hpp"

namespace deafs {

std::vector<int> GreedyTrace::prefix(std::size_t t) const {
  std::vector<int> out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(t, order.size())));
  std::sort(out.begin(), out.end());
  return out;
}

GreedyTrace greedy_nested(const Dataset& d, int p, ObjectiveKind objective, const std::vector<double>& weights) {
  if (objective != ObjectiveKind::Average && objective != ObjectiveKind::Weighted) {
    throw ConfigError(ConfigErrorKind::BadValue,
                      std::string("greedy selection supports average and weighted objectives, not ") +
                          to_string(objective));
  }
  const int K = d.num_dmus();
  if (objective == ObjectiveKind::Weighted && static_cast<int>(weights.size()) != K) {
    throw ConfigError(ConfigErrorKind::BadWeights, "weights needs one value per DMU");
  }
  if (p < 1 || p > d.num_outputs()) {
    throw ConfigError(ConfigErrorKind::BadValue, "p must be in 1.." + std::to_string(d.num_outputs()));
  }
  GreedyTrace trace;
  std::vector<bool> used(static_cast<std::size_t>(d.num_outputs()), false);
  for (int step = 0; step < p; ++step) {
    int best = -1;
    double best_value = -1.0;
    for (int o = 0; o < d.num_outputs(); ++o) {
      if (used[static_cast<std::size_t>(o)]) continue;
      std::vector<int> set = trace.order;
      set.push_back(o);
      const auto e = all_efficiencies(d, ActiveSet::with_outputs(d, set));
      double value = 0.0;
      for (int k = 0; k < K; ++k) {
        const double w = objective == ObjectiveKind::Weighted ? weights[static_cast<std::size_t>(k)] : 1.0;
        value += w * e[static_cast<std::size_t>(k)];
      }
      value /= K;
      if (best < 0 || value > best_value + 1e-9 * std::max(1.0, std::abs(best_value))) {
        best = o;
        best_value = value;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    trace.order.push_back(best);
    trace.values.push_back(best_value);
  }
  return trace;
}

}  // namespace deafs
