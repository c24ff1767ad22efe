#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace deafs::cli {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

Json column_ranges(const Eigen::MatrixXd& m, const std::vector<std::string>& names) {
  Json cols = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    cols.push_back({{"name", names[static_cast<std::size_t>(c)]},
                    {"min", m.col(c).minCoeff()},
                    {"max", m.col(c).maxCoeff()}});
  }
  return cols;
}

Json one_based(const std::vector<int>& idx) {
  Json a = Json::array();
  for (int i : idx) a.push_back(i + 1);
  return a;
}

}  // namespace

Json dataset_digest(const Dataset& d) {
  Json j;
  j["K"] = d.num_dmus();
  j["I"] = d.num_inputs();
  j["O"] = d.num_outputs();
  j["inputs"] = column_ranges(d.inputs(), d.input_names());
  j["outputs"] = column_ranges(d.outputs(), d.output_names());
  return j;
}

Json summary_json(const EfficiencySummary& s) {
  return {{"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"sd", s.std_dev},
          {"q1", s.q1},   {"q2", s.q2},   {"q3", s.q3},     {"iqr", s.iqr}};
}

Json selection_json(const Dataset& d, const SelectionSolution& s, bool timing) {
  Json j;
  j["status"] = milp::to_string(s.status);
  j["optimal"] = s.optimal;
  j["objective_value"] = s.objective_value;
  j["solver_objective"] = s.solver_objective;
  j["gap"] = s.gap;
  j["nodes"] = s.nodes;
  if (timing) j["wall_time"] = s.wall_time;
  j["consistency_error"] = s.consistency_error;
  j["selected_outputs"] = one_based(s.selected_outputs);
  Json names = Json::array();
  for (int o : s.selected_outputs) names.push_back(d.output_names()[static_cast<std::size_t>(o)]);
  j["selected_output_names"] = names;
  if (!s.selected_inputs.empty()) j["selected_inputs"] = one_based(s.selected_inputs);
  j["efficiencies"] = s.efficiencies;
  j["summary"] = summary_json(summarize(s.efficiencies));
  j["warnings"] = s.warnings;
  return j;
}

Json greedy_json(const GreedyTrace& g) {
  return {{"order", one_based(g.order)}, {"values", g.values}};
}

std::string efficiencies_csv(const Dataset& d, const std::vector<double>& e) {
  std::ostringstream out;
  out << "id,efficiency\n";
  for (std::size_t k = 0; k < e.size(); ++k) out << d.dmu_ids()[k] << ',' << format_number(e[k]) << '\n';
  return out.str();
}

std::string matrix_csv(const std::vector<std::string>& ids, const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out << "id";
  for (Eigen::Index c = 0; c < m.cols(); ++c) out << ',' << ids[static_cast<std::size_t>(c)];
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << ids[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << ',' << format_number(m(r, c));
    out << '\n';
  }
  return out.str();
}

std::array<int, 20> efficiency_bins(const std::vector<double>& e) {
  std::array<int, 20> bins{};
  for (double v : e) {
    const int b = std::clamp(static_cast<int>(std::floor(v * 20.0 + 1e-9)), 0, 19);
    ++bins[static_cast<std::size_t>(b)];
  }
  return bins;
}

std::string efficiency_histogram_csv(const std::vector<double>& e) {
  const auto bins = efficiency_bins(e);
  std::ostringstream out;
  out << "bin_start,count\n";
  for (int b = 0; b < 20; ++b) out << format_number(b * 0.05) << ',' << bins[static_cast<std::size_t>(b)] << '\n';
  return out.str();
}

std::string support_histogram_csv(const std::array<int, kSupportBins>& bins) {
  std::ostringstream out;
  out << "bin_start,count\n";
  for (int b = 0; b < kSupportBins; ++b) {
    out << b * (100 / kSupportBins) << ',' << bins[static_cast<std::size_t>(b)] << '\n';
  }
  return out.str();
}

}  // namespace deafs::cli
