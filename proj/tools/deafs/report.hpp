#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "deafs/dataset.hpp"
#include "deafs/game.hpp"
#include "deafs/greedy.hpp"
#include "deafs/selection.hpp"
#include "deafs/statistics.hpp"

namespace deafs::cli {

using Json = nlohmann::ordered_json;

/// Files produced by a run, written together once the run has finished.
using Artifacts = std::vector<std::pair<std::string, std::string>>;

/// 12 significant digits, the precision of every emitted CSV.
std::string format_number(double v);

/// K, I, O and the value range of every column.
Json dataset_digest(const Dataset& d);
Json summary_json(const EfficiencySummary& s);
/// `timing` controls whether wall-clock fields are included.
Json selection_json(const Dataset& d, const SelectionSolution& s, bool timing);
Json greedy_json(const GreedyTrace& g);

/// id,efficiency
std::string efficiencies_csv(const Dataset& d, const std::vector<double>& e);
/// Square matrix with a leading id column; row and column labels from `ids`.
std::string matrix_csv(const std::vector<std::string>& ids, const Eigen::MatrixXd& m);
/// bin_start,count over 5% bins of [0, 1].
std::string efficiency_histogram_csv(const std::vector<double>& e);
/// bin_start,count over the support bins (percent).
std::string support_histogram_csv(const std::array<int, kSupportBins>& bins);

/// Number of efficiencies per 5% bin; 1.0 lands in the last bin.
std::array<int, 20> efficiency_bins(const std::vector<double>& e);

}  // namespace deafs::cli
