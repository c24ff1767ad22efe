#pragma once

#include <vector>

#include "deafs/config.hpp"
#include "deafs/dataset.hpp"

namespace deafs {

struct GreedyTrace {
  std::vector<int> order;     // 0-based outputs in the order they were added
  std::vector<double> values;  // objective after each addition

  /// The first t outputs, sorted.
  std::vector<int> prefix(std::size_t t) const;
};

/// Nested forward selection: each step adds the output that maximizes the
/// average (or weighted) efficiency given the outputs chosen so far; ties go
/// to the lowest index. Throws ConfigError for other objectives.
GreedyTrace greedy_nested(const Dataset& d, int p, ObjectiveKind objective = ObjectiveKind::Average,
                          const std::vector<double>& weights = {});

}  // namespace deafs
