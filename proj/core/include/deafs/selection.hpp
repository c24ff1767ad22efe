#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deafs/config.hpp"
#include "deafs/dataset.hpp"
#include "deafs/efficiency.hpp"
#include "deafs/solver.hpp"
#include "deafs/statistics.hpp"

namespace deafs {

enum class SelectionMode { Individual, Joint };

struct SelectionTarget {
  SelectionMode mode = SelectionMode::Joint;
  int dmu = 0;  // 0-based, individual mode only

  static SelectionTarget joint() { return {}; }
  static SelectionTarget individual(int k) { return {SelectionMode::Individual, k}; }
};

struct SelectionSolution {
  std::vector<int> selected_outputs;  // 0-based, sorted
  std::vector<int> selected_inputs;   // empty unless inputs are selected
  /// E^(k) of every DMU under the selection.
  std::vector<double> efficiencies;
  /// v^(k)(p) in individual mode; the configured objective in joint mode.
  double objective_value = 0.0;
  double solver_objective = 0.0;
  milp::SolveStatus status = milp::SolveStatus::Optimal;
  bool optimal = true;
  double gap = 0.0;
  long nodes = 0;
  double wall_time = 0.0;
  /// Largest gap between solver values and the re-solved DEA efficiencies.
  double consistency_error = 0.0;
  std::vector<std::string> warnings;

  ActiveSet active_set(const Dataset& d) const;
};

/// Objective of `target` under cfg evaluated on an efficiency vector.
double objective_from_efficiencies(const SelectionConfig& cfg, SelectionTarget target,
                                   const std::vector<double>& efficiencies);

/// True when larger objective values are better.
bool objective_maximizes(const SelectionConfig& cfg, SelectionTarget target);

/// Efficiencies of all DMUs under a realized selection, honoring weight
/// bounds; nullopt when a bounded LP is infeasible.
std::optional<std::vector<double>> selection_efficiencies(const Dataset& d, const SelectionConfig& cfg,
                                                          const ActiveSet& a);

/// Builds, solves and verifies one selection problem. Throws InfeasibleError
/// when no selection satisfies the constraints.
SelectionSolution solve_selection(const Dataset& d, const SelectionConfig& cfg, SelectionTarget target);

struct SweepRow {
  int p = 0;
  std::optional<SelectionSolution> solution;
  std::optional<EfficiencySummary> summary;
  std::optional<double> marginal;  // v(p+1) - v(p)
  std::string error;
  bool infeasible = false;  // the failure was InfeasibleError
};

/// One joint (or individual) solve per p in [p_min, p_max]; failures are
/// recorded per row and the sweep continues.
std::vector<SweepRow> sweep_p(const Dataset& d, const SelectionConfig& cfg, int p_min, int p_max,
                              SelectionTarget target = SelectionTarget::joint());

}  // namespace deafs
