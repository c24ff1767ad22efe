#include "deafs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "deafs/errors.hpp"

namespace deafs {

namespace {

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double v = 1.0;
  for (int t = 1; t <= r; ++t) v = v * (n - r + t) / t;
  return std::round(v);
}

// Advances `c` to the next r-combination of 0..n-1 in lexicographic order.
bool next_combination(std::vector<int>& c, int n) {
  const int r = static_cast<int>(c.size());
  int t = r - 1;
  while (t >= 0 && c[static_cast<std::size_t>(t)] == n - r + t) --t;
  if (t < 0) return false;
  ++c[static_cast<std::size_t>(t)];
  for (int u = t + 1; u < r; ++u) c[static_cast<std::size_t>(u)] = c[static_cast<std::size_t>(u - 1)] + 1;
  return true;
}

std::vector<int> first_combination(int r) {
  std::vector<int> c(static_cast<std::size_t>(r));
  std::iota(c.begin(), c.end(), 0);
  return c;
}

}  // namespace

double enumeration_size(const Dataset& d, const SelectionConfig& cfg) {
  double n = binomial(d.num_outputs(), cfg.p);
  if (cfg.p_tilde) n *= binomial(d.num_inputs(), *cfg.p_tilde);
  return n;
}

SelectionSolution enumerate_best(const Dataset& d, const SelectionConfig& cfg, SelectionTarget target,
                                 std::size_t cap) {
  validate_config(cfg, d);
  if (target.mode == SelectionMode::Individual && (target.dmu < 0 || target.dmu >= d.num_dmus())) {
    throw ConfigError(ConfigErrorKind::BadValue, "DMU index out of range");
  }
  const double size = enumeration_size(d, cfg);
  if (size > static_cast<double>(cap)) {
    throw CapExceeded("enumeration needs " + std::to_string(static_cast<long long>(size)) +
                      " subsets, above the cap of " + std::to_string(cap));
  }
  const auto conflicts = conflict_pairs(cfg, d);
  const bool maximize = objective_maximizes(cfg, target);

  std::optional<SelectionSolution> best;
  std::vector<int> outputs = first_combination(cfg.p);
  do {
    if (!admissible_outputs(cfg, outputs, conflicts)) continue;
    std::vector<int> inputs = first_combination(cfg.p_tilde.value_or(d.num_inputs()));
    do {
      ActiveSet a;
      a.outputs = outputs;
      a.inputs = inputs;
      double value = 0.0;
      std::optional<std::vector<double>> eff;
      if (target.mode == SelectionMode::Joint) {
        eff = selection_efficiencies(d, cfg, a);
        if (!eff) continue;
        value = objective_from_efficiencies(cfg, target, *eff);
      } else {
        std::optional<double> e;
        try {
          e = bounded_efficiency(d, target.dmu, a, cfg.weight_bounds);
        } catch (const DataError& err) {
          if (err.kind() != DataErrorKind::NormalizationInfeasible) throw;
        }
        if (!e) continue;
        value = *e;
      }
      const bool better = !best || (maximize ? value > best->objective_value + 1e-9 * std::max(1.0, std::abs(value))
                                             : value < best->objective_value - 1e-9 * std::max(1.0, std::abs(value)));
      if (!better) continue;
      SelectionSolution s;
      s.selected_outputs = outputs;
      if (cfg.p_tilde) s.selected_inputs = inputs;
      s.objective_value = value;
      s.solver_objective = value;
      if (eff) s.efficiencies = std::move(*eff);
      best = std::move(s);
    } while (cfg.p_tilde && next_combination(inputs, d.num_inputs()));
  } while (next_combination(outputs, d.num_outputs()));

  if (!best) {
    throw InfeasibleError("no subset of p = " + std::to_string(cfg.p) + " outputs satisfies the constraints");
  }
  if (best->efficiencies.empty()) {
    auto eff = selection_efficiencies(d, cfg, best->active_set(d));
    if (eff) {
      best->efficiencies = std::move(*eff);
    } else {
      // Other DMUs may have no bounded solution under this DMU's selection.
      best->efficiencies.assign(static_cast<std::size_t>(d.num_dmus()), std::nan(""));
      best->efficiencies[static_cast<std::size_t>(target.dmu)] = best->objective_value;
    }
  }
  return *best;
}

std::pair<int, double> single_input_p1_value(const Dataset& d, int k) {
  if (d.num_inputs() != 1) {
    throw DataError(DataErrorKind::InvariantViolation, "closed form needs exactly one input");
  }
  for (int j = 0; j < d.num_dmus(); ++j) {
    if (!(d.input(j, 0) > 0.0)) {
      throw DataError(DataErrorKind::InvariantViolation, "closed form needs every input positive");
    }
  }
  int best = 0;
  double best_value = -1.0;
  for (int o = 0; o < d.num_outputs(); ++o) {
    double top = 0.0;
    for (int j = 0; j < d.num_dmus(); ++j) top = std::max(top, d.output(j, o) / d.input(j, 0));
    const double value = top > 0.0 ? (d.output(k, o) / d.input(k, 0)) / top : 0.0;
    if (value > best_value) {
      best = o;
      best_value = value;
    }
  }
  return {best, best_value};
}

}  // namespace deafs
