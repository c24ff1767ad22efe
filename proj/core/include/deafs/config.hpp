#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deafs/efficiency.hpp"

namespace deafs {

enum class ObjectiveKind { Average, Weighted, Quadratic, Min, Percentile };

const char* to_string(ObjectiveKind kind);
ObjectiveKind parse_objective(const std::string& name);

/// Outputs of one cluster (0-based) and how many of them may be selected.
struct Cluster {
  std::vector<int> outputs;
  int p_min = 0;
  int p_max = 0;
};

struct CostBudget {
  std::vector<double> cost;  // one per output
  double budget = 0.0;
};

/// Pairs of outputs that must not be selected together. Pairs are either
/// listed explicitly or derived from the output correlations with `tau`.
struct CorrelationRule {
  std::optional<double> tau;
  std::vector<std::pair<int, int>> pairs;  // 0-based, first < second
};

struct SelectionConfig {
  int p = 1;
  std::optional<int> p_tilde;
  ObjectiveKind objective = ObjectiveKind::Average;
  std::vector<double> weights;  // omega, one per DMU (weighted objective)
  int pi = 50;                  // percentile objective, 1..100
  WeightBounds weight_bounds;
  std::optional<CostBudget> cost;
  std::vector<Cluster> clusters;
  std::optional<CorrelationRule> correlation;
  double big_m = 1000.0;
  double time_limit = 300.0;
  double gap_tol = 1e-6;
  /// Replace big-M by the data bounds 1/y (outputs) and 1/x (inputs).
  bool tighten = true;
  /// Break ties between optimal selections toward the lexicographically
  /// smallest output set. Costs one extra solve per output.
  bool lex_ties = false;
  /// Seed the joint average/weighted MILP with the greedy selection.
  bool warm_start = true;
};

/// Parses `key=value` lines; `#` starts a comment. Indices in the file are
/// 1-based. Throws ConfigError.
SelectionConfig parse_config(std::istream& in);
SelectionConfig load_config(const std::filesystem::path& path);
/// Inverse of parse_config for every field that differs from the default.
std::string format_config(const SelectionConfig& cfg);

/// Checks ranges against the dataset shape (ConfigError) and the arithmetic
/// that makes a selection impossible before any solve (InfeasibleError).
void validate_config(const SelectionConfig& cfg, const Dataset& d);

/// Number of DMUs that must reach lambda under the percentile objective.
int percentile_count(int num_dmus, int pi);

/// Output pairs that may not be selected together under cfg.correlation.
std::vector<std::pair<int, int>> conflict_pairs(const SelectionConfig& cfg, const Dataset& d);

/// True when the 0-based output set satisfies the cardinality, lower-bound,
/// cost, cluster and conflict rules of cfg.
bool admissible_outputs(const SelectionConfig& cfg, const std::vector<int>& outputs,
                        const std::vector<std::pair<int, int>>& conflicts);

}  // namespace deafs
