#pragma once

#include <map>
#include <optional>
#include <vector>

#include "deafs/dataset.hpp"
#include "deafs/model.hpp"

namespace deafs {

/// 0-based indices of the outputs and inputs that take part in an
/// evaluation. Sorted, without duplicates.
struct ActiveSet {
  std::vector<int> outputs;
  std::vector<int> inputs;

  static ActiveSet all(const Dataset& d);
  /// Every input, the given outputs.
  static ActiveSet with_outputs(const Dataset& d, std::vector<int> outputs);
};

/// Bounds L <= beta_o <= U on an output weight.
struct WeightBound {
  double lower = 0.0;
  double upper = milp::kInfinity;
};

/// Keyed by 0-based output index.
using WeightBounds = std::map<int, WeightBound>;

/// CRS input-oriented multiplier LP for DMU k over the active set:
/// max sum beta_o y_o^(k) s.t. sum beta y^(j) - sum alpha x^(j) <= 0 for all
/// j, sum alpha x^(k) = 1, alpha, beta >= 0 (plus weight bounds on active
/// outputs when given). Throws DataError(NormalizationInfeasible) when every
/// active input of DMU k is zero.
milp::MilpModel build_dea_lp(const Dataset& d, int k, const ActiveSet& a,
                             const WeightBounds& bounds = {});

/// E^(k)(a) in [0, 1]; 0 for an empty output set.
double efficiency(const Dataset& d, int k, const ActiveSet& a);

/// As efficiency() with weight bounds; nullopt when the bounded LP has no
/// feasible point.
std::optional<double> bounded_efficiency(const Dataset& d, int k, const ActiveSet& a,
                                         const WeightBounds& bounds);

/// Efficiencies of all K DMUs under the same active set, ordered by DMU.
std::vector<double> all_efficiencies(const Dataset& d, const ActiveSet& a);

/// nullopt when some DMU's bounded LP is infeasible.
std::optional<std::vector<double>> all_bounded_efficiencies(const Dataset& d, const ActiveSet& a,
                                                            const WeightBounds& bounds);

}  // namespace deafs
