#include "deafs/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "deafs/errors.hpp"

namespace deafs {

double sorted_quantile(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

EfficiencySummary summarize(std::span<const double> values) {
  if (values.empty()) {
    throw DataError(DataErrorKind::EmptyVector, "cannot summarize an empty efficiency vector");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  EfficiencySummary s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.mean = std::clamp(std::accumulate(sorted.begin(), sorted.end(), 0.0) / n, s.min, s.max);
  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.std_dev = std::sqrt(ss / n);
  s.q1 = sorted_quantile(sorted, 0.25);
  s.q2 = sorted_quantile(sorted, 0.50);
  s.q3 = sorted_quantile(sorted, 0.75);
  s.iqr = s.q3 - s.q1;
  return s;
}

}  // namespace deafs
