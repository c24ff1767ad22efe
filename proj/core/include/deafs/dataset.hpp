#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deafs/errors.hpp"

namespace deafs {

/// K decision-making units, each consuming I inputs and producing O outputs.
///
/// Immutable once constructed; the constructor enforces the invariants
/// (K, I, O >= 1, finite nonnegative entries, unique ids, at least one
/// positive input per DMU) and throws DataError on the first violation.
class Dataset {
 public:
  Dataset(std::vector<std::string> dmu_ids, Eigen::MatrixXd inputs,
          Eigen::MatrixXd outputs, std::vector<std::string> input_names,
          std::vector<std::string> output_names);

  int num_dmus() const { return static_cast<int>(inputs_.rows()); }
  int num_inputs() const { return static_cast<int>(inputs_.cols()); }
  int num_outputs() const { return static_cast<int>(outputs_.cols()); }

  double input(int k, int i) const { return inputs_(k, i); }
  double output(int k, int o) const { return outputs_(k, o); }

  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const Eigen::MatrixXd& outputs() const { return outputs_; }
  const std::vector<std::string>& dmu_ids() const { return dmu_ids_; }
  const std::vector<std::string>& input_names() const { return input_names_; }
  const std::vector<std::string>& output_names() const { return output_names_; }

 private:
  std::vector<std::string> dmu_ids_;
  Eigen::MatrixXd inputs_;
  Eigen::MatrixXd outputs_;
  std::vector<std::string> input_names_;
  std::vector<std::string> output_names_;
};

/// One problem found while reading or checking a table.
struct DataIssue {
  DataErrorKind kind;
  std::string message;
  int row = 0;     // 1-based data row, 0 when not row-specific
  int column = 0;  // 1-based column, 0 when not column-specific
};

/// Result of reading a CSV without enforcing invariants. Cells that failed
/// to parse are stored as 0 and reported in `issues`.
struct ParsedTable {
  std::vector<std::string> dmu_ids;
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd outputs;
  std::vector<DataIssue> issues;
};

/// Reads the `id,in:<name>...,out:<name>...` CSV layout and reports every
/// problem it finds, including Dataset invariant violations.
ParsedTable parse_dataset_csv(std::istream& in);

/// Throws DataError for the first issue; the message lists all of them.
Dataset to_dataset(ParsedTable table);

Dataset load_dataset(const std::filesystem::path& path);
Dataset read_dataset(std::istream& in);

/// Writes the dataset in the same CSV layout with 12 significant digits.
void write_dataset_csv(std::ostream& out, const Dataset& d);

/// Divides each output column by its range max - min. Constant columns are
/// left unchanged; their names are appended to `constant_columns` if given.
Dataset normalize_outputs(const Dataset& d,
                          std::vector<std::string>* constant_columns = nullptr);

/// Per-output max - min.
std::vector<double> output_ranges(const Dataset& d);

/// Pearson correlations between output columns. Pairs involving a
/// zero-variance column are 0 (including the diagonal entry of that column).
Eigen::MatrixXd correlation_matrix(const Dataset& d);

/// 0-1 conflict matrix: R(o, o') = 1 iff rho(o, o') >= tau and o != o'.
Eigen::MatrixXi threshold_rule_matrix(const Eigen::MatrixXd& rho, double tau);

}  // namespace deafs
