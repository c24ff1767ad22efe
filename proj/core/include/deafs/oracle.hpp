#pragma once

#include <cstddef>
#include <utility>

#include "deafs/selection.hpp"

namespace deafs {

inline constexpr std::size_t kDefaultEnumerationCap = 100000;

/// Number of (output subset, input subset) pairs enumerate_best visits.
double enumeration_size(const Dataset& d, const SelectionConfig& cfg);

/// Exact optimum by enumerating every admissible output (and input) subset
/// and solving the DEA LPs of each; ties go to the lexicographically smallest
/// output set, then input set. Throws CapExceeded above `cap` subsets and
/// InfeasibleError when no subset is admissible.
SelectionSolution enumerate_best(const Dataset& d, const SelectionConfig& cfg, SelectionTarget target,
                                 std::size_t cap = kDefaultEnumerationCap);

/// Closed form of the best single output for DMU k when I = 1:
/// max_o (y_o^(k)/x^(k)) / max_j (y_o^(j)/x^(j)), ties to the lowest o.
/// Returns (0-based output, value).
std::pair<int, double> single_input_p1_value(const Dataset& d, int k);

}  // namespace deafs
