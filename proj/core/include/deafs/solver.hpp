#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deafs/model.hpp"

namespace deafs::milp {

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit, TargetReached };

const char* to_string(SolveStatus status);

struct MilpOptions {
  double time_limit = 0.0;  // seconds; 0 means none
  double gap_tol = 1e-6;
  double integrality_tol = 1e-6;
  /// Objective value (model sense) that a solution must reach to be
  /// accepted; subtrees whose bound cannot reach it are pruned.
  std::optional<double> cutoff;
  /// Stop as soon as an incumbent at least this good is found.
  std::optional<double> target;
  /// Partial assignment of binary variables; the remaining variables are
  /// completed by the LP. Ignored with a warning when infeasible.
  std::vector<std::pair<int, double>> warm_start;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  double bound = 0.0;  // best proven bound, model sense
  std::vector<double> values;
  double gap = 0.0;
  long nodes = 0;
  long lp_iterations = 0;
  double wall_time = 0.0;
  std::vector<std::string> warnings;

  bool has_solution() const { return !values.empty(); }
  double value(const MilpModel& model, const std::string& name) const;
  std::map<std::string, double> named_values(const MilpModel& model) const;
};

/// LP relaxation (binaries relaxed to [0,1]).
SolveOutcome solve_lp(const MilpModel& model, double time_limit = 0.0);

/// Best-first branch-and-bound on the binary variables.
SolveOutcome solve_milp(const MilpModel& model, const MilpOptions& options = {});

/// Outer approximation for minimization models with convex separable
/// quadratic terms; falls through to solve_milp when there are none.
SolveOutcome solve_convex_miqp(const MilpModel& model, const MilpOptions& options = {});

/// Dispatches to solve_convex_miqp or solve_milp.
SolveOutcome solve(const MilpModel& model, const MilpOptions& options = {});

}  // namespace deafs::milp
