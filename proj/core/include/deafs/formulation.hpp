#pragma once

#include <vector>

#include "deafs/config.hpp"
#include "deafs/dataset.hpp"
#include "deafs/model.hpp"

namespace deafs {

/// A selection MILP with the variable indices needed to read it back.
/// Each block holds one DMU's multiplier LP; the joint model has K blocks
/// sharing the selection binaries, an individual model has one.
struct SelectionModel {
  milp::MilpModel model;
  bool joint = false;
  std::vector<int> dmus;                       // DMU of each block
  std::vector<int> z;                          // output selection, per output
  std::vector<int> z_in;                       // input selection, empty without p_tilde
  std::vector<std::vector<int>> alpha;         // [block][input]
  std::vector<std::vector<int>> beta;          // [block][output]
  std::vector<std::vector<milp::LinearTerm>> efficiency_terms;  // e of each block
  int lambda = -1;                             // min / percentile objectives
  std::vector<int> delta;                      // percentile indicators, per block
};

/// Upper bounds on beta_o^(k): 1/y_o^(k), or 0 where y_o^(k) = 0.
std::vector<double> tightened_output_bounds(const Dataset& d, int k);

/// Bounds on beta_o^(k) implied by every frontier row, min over j of
/// max_i (x_i^(j) / x_i^(k)) / y_o^(j); never above the 1/y_o^(k) bound.
/// Falls back to 1/y_o^(k) when DMU k has a zero input.
std::vector<double> frontier_output_bounds(const Dataset& d, int k);

/// Outputs whose z^(k)_o can be fixed to 0 in the individual model: those
/// with y_o^(k) = 0, provided at least p outputs of DMU k are positive.
std::vector<bool> forced_zero_outputs(const Dataset& d, int k, int p);

/// Individual output selection for DMU k (maximizes E^(k); the objective
/// kind of cfg applies to joint models only). Throws ConfigError and
/// InfeasibleError from validate_config.
SelectionModel build_osdea_individual(const Dataset& d, int k, const SelectionConfig& cfg);

/// Individual output and input selection; cfg.p_tilde must be set.
SelectionModel build_fsdea_individual(const Dataset& d, int k, const SelectionConfig& cfg);

/// Joint selection shared by all DMUs under cfg.objective.
SelectionModel build_osdea_joint(const Dataset& d, const SelectionConfig& cfg);

/// Sets the objective of a model built from blocks.
void attach_objective(SelectionModel& m, const Dataset& d, const SelectionConfig& cfg);

/// Adds the cost knapsack, cluster cardinalities and pairwise conflicts.
void apply_extensions(SelectionModel& m, const Dataset& d, const SelectionConfig& cfg);

}  // namespace deafs
