#include "deafs/efficiency.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "deafs/errors.hpp"
#include "deafs/parallel.hpp"
#include "deafs/solver.hpp"

namespace deafs {

ActiveSet ActiveSet::all(const Dataset& d) {
  ActiveSet a;
  a.outputs.resize(static_cast<std::size_t>(d.num_outputs()));
  a.inputs.resize(static_cast<std::size_t>(d.num_inputs()));
  std::iota(a.outputs.begin(), a.outputs.end(), 0);
  std::iota(a.inputs.begin(), a.inputs.end(), 0);
  return a;
}

ActiveSet ActiveSet::with_outputs(const Dataset& d, std::vector<int> outputs) {
  ActiveSet a = all(d);
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
  a.outputs = std::move(outputs);
  return a;
}

namespace {

void check_indices(const Dataset& d, int k, const ActiveSet& a) {
  if (k < 0 || k >= d.num_dmus()) throw DataError(DataErrorKind::InvariantViolation, "DMU index out of range");
  for (int o : a.outputs) {
    if (o < 0 || o >= d.num_outputs()) throw DataError(DataErrorKind::InvariantViolation, "output index out of range");
  }
  if (a.inputs.empty()) throw DataError(DataErrorKind::InvariantViolation, "active input set is empty");
  for (int i : a.inputs) {
    if (i < 0 || i >= d.num_inputs()) throw DataError(DataErrorKind::InvariantViolation, "input index out of range");
  }
}

std::string dmu_label(const Dataset& d, int k) {
  return "DMU " + d.dmu_ids()[static_cast<std::size_t>(k)];
}

}  // namespace

milp::MilpModel build_dea_lp(const Dataset& d, int k, const ActiveSet& a, const WeightBounds& bounds) {
  check_indices(d, k, a);
  const bool normalizable =
      std::any_of(a.inputs.begin(), a.inputs.end(), [&](int i) { return d.input(k, i) > 0.0; });
  if (!normalizable) {
    throw DataError(DataErrorKind::NormalizationInfeasible,
                    dmu_label(d, k) + ": every active input is zero, so sum alpha x = 1 has no solution",
                    k + 1);
  }
  milp::MilpModel m(milp::Sense::Maximize);
  std::vector<int> alpha;
  std::vector<int> beta;
  for (int i : a.inputs) {
    alpha.push_back(m.add_continuous("alpha_" + std::to_string(i + 1), 0.0, milp::kInfinity));
  }
  for (int o : a.outputs) {
    double lo = 0.0;
    double hi = milp::kInfinity;
    if (const auto it = bounds.find(o); it != bounds.end()) {
      lo = it->second.lower;
      hi = it->second.upper;
    }
    beta.push_back(m.add_continuous("beta_" + std::to_string(o + 1), lo, hi, d.output(k, o)));
  }
  for (int j = 0; j < d.num_dmus(); ++j) {
    std::vector<milp::LinearTerm> terms;
    for (std::size_t t = 0; t < a.outputs.size(); ++t) {
      const double y = d.output(j, a.outputs[t]);
      if (y != 0.0) terms.push_back({beta[t], y});
    }
    for (std::size_t t = 0; t < a.inputs.size(); ++t) {
      const double x = d.input(j, a.inputs[t]);
      if (x != 0.0) terms.push_back({alpha[t], -x});
    }
    m.add_constraint("frontier_" + std::to_string(j + 1), std::move(terms), milp::Relation::LessEqual, 0.0);
  }
  std::vector<milp::LinearTerm> norm;
  for (std::size_t t = 0; t < a.inputs.size(); ++t) {
    const double x = d.input(k, a.inputs[t]);
    if (x != 0.0) norm.push_back({alpha[t], x});
  }
  m.add_constraint("normalization", std::move(norm), milp::Relation::Equal, 1.0);
  return m;
}

std::optional<double> bounded_efficiency(const Dataset& d, int k, const ActiveSet& a,
                                         const WeightBounds& bounds) {
  check_indices(d, k, a);
  if (a.outputs.empty()) return 0.0;
  const milp::MilpModel m = build_dea_lp(d, k, a, bounds);
  const milp::SolveOutcome r = milp::solve_lp(m);
  if (r.status == milp::SolveStatus::Infeasible) return std::nullopt;
  if (r.status != milp::SolveStatus::Optimal) {
    throw SolverError(SolverErrorKind::NoSolution,
                      dmu_label(d, k) + ": DEA LP ended with status " + milp::to_string(r.status));
  }
  return std::clamp(r.objective, 0.0, 1.0);
}

double efficiency(const Dataset& d, int k, const ActiveSet& a) {
  const auto e = bounded_efficiency(d, k, a, {});
  if (!e) throw SolverError(SolverErrorKind::NoSolution, dmu_label(d, k) + ": DEA LP infeasible");
  return *e;
}

std::optional<std::vector<double>> all_bounded_efficiencies(const Dataset& d, const ActiveSet& a,
                                                            const WeightBounds& bounds) {
  const auto K = static_cast<std::size_t>(d.num_dmus());
  std::vector<std::optional<double>> values(K);
  // Tiny LPs; threads only pay off for larger K.
  const unsigned threads = K >= 64 ? 0u : 1u;
  parallel_for(
      K, [&](std::size_t k) { values[k] = bounded_efficiency(d, static_cast<int>(k), a, bounds); },
      threads);
  std::vector<double> out(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (!values[k]) return std::nullopt;
    out[k] = *values[k];
  }
  return out;
}

std::vector<double> all_efficiencies(const Dataset& d, const ActiveSet& a) {
  auto e = all_bounded_efficiencies(d, a, {});
  if (!e) throw SolverError(SolverErrorKind::NoSolution, "DEA LP infeasible");
  return std::move(*e);
}

}  // namespace deafs
