#pragma once

#include <span>

namespace deafs {

struct EfficiencySummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;  // population
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
};

/// Descriptive statistics of an efficiency distribution. Quartiles use
/// linear interpolation between order statistics at position (n-1)q.
/// Throws DataError(EmptyVector) on empty input.
EfficiencySummary summarize(std::span<const double> values);

/// Linear-interpolation quantile of an already sorted, nonempty range.
double sorted_quantile(std::span<const double> sorted, double q);

}  // namespace deafs
