#include "deafs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace deafs {

const char* to_string(DataErrorKind kind) {
  switch (kind) {
    case DataErrorKind::MissingColumn: return "MissingColumn";
    case DataErrorKind::NegativeValue: return "NegativeValue";
    case DataErrorKind::NonNumericCell: return "NonNumericCell";
    case DataErrorKind::DuplicateDmuId: return "DuplicateDmuId";
    case DataErrorKind::EmptyDataset: return "EmptyDataset";
    case DataErrorKind::InvariantViolation: return "InvariantViolation";
    case DataErrorKind::TooFewRows: return "TooFewRows";
    case DataErrorKind::EmptyVector: return "EmptyVector";
    case DataErrorKind::NormalizationInfeasible: return "NormalizationInfeasible";
    case DataErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::vector<DataIssue> check_invariants(const std::vector<std::string>& ids,
                                        const Eigen::MatrixXd& inputs,
                                        const Eigen::MatrixXd& outputs) {
  std::vector<DataIssue> issues;
  const auto rows = inputs.rows();
  if (rows == 0) {
    issues.push_back({DataErrorKind::EmptyDataset, "dataset has no DMUs"});
    return issues;
  }
  if (inputs.cols() == 0) {
    issues.push_back({DataErrorKind::MissingColumn, "dataset has no input columns"});
  }
  if (outputs.cols() == 0) {
    issues.push_back({DataErrorKind::MissingColumn, "dataset has no output columns"});
  }
  if (outputs.rows() != rows || static_cast<Eigen::Index>(ids.size()) != rows) {
    issues.push_back({DataErrorKind::InvariantViolation,
                      "ids, inputs and outputs disagree on the number of DMUs"});
    return issues;
  }
  auto check_block = [&](const Eigen::MatrixXd& m, int col_offset) {
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double v = m(k, c);
        const int row = static_cast<int>(k) + 1;
        const int col = static_cast<int>(c) + col_offset;
        if (!std::isfinite(v)) {
          issues.push_back({DataErrorKind::NonNumericCell,
                            "non-finite value at row " + std::to_string(row) +
                                ", column " + std::to_string(col),
                            row, col});
        } else if (v < 0.0) {
          issues.push_back({DataErrorKind::NegativeValue,
                            "negative value at row " + std::to_string(row) +
                                ", column " + std::to_string(col),
                            row, col});
        }
      }
    }
  };
  check_block(inputs, 2);
  check_block(outputs, 2 + static_cast<int>(inputs.cols()));

  std::unordered_set<std::string> seen;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!seen.insert(ids[k]).second) {
      issues.push_back({DataErrorKind::DuplicateDmuId,
                        "duplicate DMU id '" + ids[k] + "'",
                        static_cast<int>(k) + 1, 1});
    }
  }
  if (inputs.cols() > 0) {
    for (Eigen::Index k = 0; k < rows; ++k) {
      if (!(inputs.row(k).maxCoeff() > 0.0)) {
        issues.push_back({DataErrorKind::InvariantViolation,
                          "DMU '" + ids[static_cast<std::size_t>(k)] +
                              "' has no strictly positive input",
                          static_cast<int>(k) + 1, 0});
      }
    }
  }
  return issues;
}

std::string join_messages(const std::vector<DataIssue>& issues) {
  std::string msg;
  for (const auto& issue : issues) {
    if (!msg.empty()) msg += "; ";
    msg += issue.message;
  }
  return msg;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(trim(field));
  return fields;
}

bool parse_number(std::string text, double& out) {
  // U+2212 MINUS SIGN is accepted as '-'.
  static const std::string kUnicodeMinus = "\xE2\x88\x92";
  if (text.rfind(kUnicodeMinus, 0) == 0) text = "-" + text.substr(kUnicodeMinus.size());
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> dmu_ids, Eigen::MatrixXd inputs,
                 Eigen::MatrixXd outputs, std::vector<std::string> input_names,
                 std::vector<std::string> output_names)
    : dmu_ids_(std::move(dmu_ids)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      input_names_(std::move(input_names)),
      output_names_(std::move(output_names)) {
  const auto issues = check_invariants(dmu_ids_, inputs_, outputs_);
  if (!issues.empty()) {
    throw DataError(issues.front().kind, join_messages(issues), issues.front().row,
                    issues.front().column);
  }
  if (input_names_.size() != static_cast<std::size_t>(inputs_.cols())) {
    input_names_.resize(static_cast<std::size_t>(inputs_.cols()));
    for (std::size_t i = 0; i < input_names_.size(); ++i) {
      if (input_names_[i].empty()) input_names_[i] = "x" + std::to_string(i + 1);
    }
  }
  if (output_names_.size() != static_cast<std::size_t>(outputs_.cols())) {
    output_names_.resize(static_cast<std::size_t>(outputs_.cols()));
    for (std::size_t o = 0; o < output_names_.size(); ++o) {
      if (output_names_[o].empty()) output_names_[o] = "y" + std::to_string(o + 1);
    }
  }
}

ParsedTable parse_dataset_csv(std::istream& in) {
  ParsedTable table;
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) {
    table.issues.push_back({DataErrorKind::EmptyDataset, "file has no header row"});
    return table;
  }
  // UTF-8 byte order mark
  if (header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0] = header[0].substr(3);

  std::vector<int> input_cols;
  std::vector<int> output_cols;
  std::string id_name = header[0];
  std::transform(id_name.begin(), id_name.end(), id_name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (id_name != "id") {
    table.issues.push_back({DataErrorKind::MissingColumn,
                            "first column must be 'id', found '" + header[0] + "'", 0, 1});
  }
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h.rfind("in:", 0) == 0) {
      input_cols.push_back(static_cast<int>(c));
      table.input_names.push_back(h.substr(3));
    } else if (h.rfind("out:", 0) == 0) {
      output_cols.push_back(static_cast<int>(c));
      table.output_names.push_back(h.substr(4));
    } else {
      table.issues.push_back({DataErrorKind::MissingColumn,
                              "column '" + h + "' has no in:/out: role prefix", 0,
                              static_cast<int>(c) + 1});
    }
  }
  if (input_cols.empty()) {
    table.issues.push_back({DataErrorKind::MissingColumn, "no 'in:' column in header"});
  }
  if (output_cols.empty()) {
    table.issues.push_back({DataErrorKind::MissingColumn, "no 'out:' column in header"});
  }

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  const auto K = static_cast<Eigen::Index>(rows.size());
  table.inputs = Eigen::MatrixXd::Zero(K, static_cast<Eigen::Index>(input_cols.size()));
  table.outputs = Eigen::MatrixXd::Zero(K, static_cast<Eigen::Index>(output_cols.size()));
  bool cells_ok = true;
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& fields = rows[static_cast<std::size_t>(k)];
    const int row = static_cast<int>(k) + 1;
    table.dmu_ids.push_back(fields.empty() ? std::string() : fields[0]);
    if (fields.size() != header.size()) {
      table.issues.push_back({DataErrorKind::NonNumericCell,
                              "row " + std::to_string(row) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()),
                              row, 0});
      cells_ok = false;
      continue;
    }
    auto read_cell = [&](int col, double& dst) {
      const std::string& text = fields[static_cast<std::size_t>(col)];
      double v = 0.0;
      if (!parse_number(text, v) || !std::isfinite(v)) {
        table.issues.push_back({DataErrorKind::NonNumericCell,
                                "cell '" + text + "' at row " + std::to_string(row) +
                                    ", column " + std::to_string(col + 1) +
                                    " is not a finite number",
                                row, col + 1});
        cells_ok = false;
        return;
      }
      if (v < 0.0) {
        table.issues.push_back({DataErrorKind::NegativeValue,
                                "negative value " + text + " at row " + std::to_string(row) +
                                    ", column " + std::to_string(col + 1),
                                row, col + 1});
        cells_ok = false;
      }
      dst = v;
    };
    for (std::size_t i = 0; i < input_cols.size(); ++i) {
      read_cell(input_cols[i], table.inputs(k, static_cast<Eigen::Index>(i)));
    }
    for (std::size_t o = 0; o < output_cols.size(); ++o) {
      read_cell(output_cols[o], table.outputs(k, static_cast<Eigen::Index>(o)));
    }
  }

  if (K == 0) {
    table.issues.push_back({DataErrorKind::EmptyDataset, "file has no data rows"});
  } else if (!input_cols.empty() && !output_cols.empty()) {
    for (auto& issue : check_invariants(table.dmu_ids, table.inputs, table.outputs)) {
      // Cell-level problems were already reported with the raw text.
      const bool cell_level = issue.kind == DataErrorKind::NegativeValue ||
                              issue.kind == DataErrorKind::NonNumericCell;
      if (cell_level) continue;
      if (!cells_ok && issue.kind == DataErrorKind::InvariantViolation) {
        // An unparsable cell reads as 0; only report rows that are all-zero
        // for real.
        const int r = issue.row - 1;
        bool genuine = true;
        for (const auto& prior : table.issues) {
          if (prior.row == issue.row) genuine = false;
        }
        if (!genuine || r < 0) continue;
      }
      table.issues.push_back(std::move(issue));
    }
  }
  return table;
}

Dataset to_dataset(ParsedTable table) {
  if (!table.issues.empty()) {
    const auto& first = table.issues.front();
    throw DataError(first.kind, join_messages(table.issues), first.row, first.column);
  }
  return Dataset(std::move(table.dmu_ids), std::move(table.inputs), std::move(table.outputs),
                 std::move(table.input_names), std::move(table.output_names));
}

Dataset read_dataset(std::istream& in) { return to_dataset(parse_dataset_csv(in)); }

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(DataErrorKind::Io, "cannot open dataset file '" + path.string() + "'");
  }
  return read_dataset(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& d) {
  const auto old_precision = out.precision(12);
  out << "id";
  for (const auto& n : d.input_names()) out << ",in:" << n;
  for (const auto& n : d.output_names()) out << ",out:" << n;
  out << '\n';
  for (int k = 0; k < d.num_dmus(); ++k) {
    out << d.dmu_ids()[static_cast<std::size_t>(k)];
    for (int i = 0; i < d.num_inputs(); ++i) out << ',' << d.input(k, i);
    for (int o = 0; o < d.num_outputs(); ++o) out << ',' << d.output(k, o);
    out << '\n';
  }
  out.precision(old_precision);
}

std::vector<double> output_ranges(const Dataset& d) {
  std::vector<double> ranges(static_cast<std::size_t>(d.num_outputs()));
  for (int o = 0; o < d.num_outputs(); ++o) {
    const auto col = d.outputs().col(o);
    ranges[static_cast<std::size_t>(o)] = col.maxCoeff() - col.minCoeff();
  }
  return ranges;
}

Dataset normalize_outputs(const Dataset& d, std::vector<std::string>* constant_columns) {
  Eigen::MatrixXd outputs = d.outputs();
  const auto ranges = output_ranges(d);
  for (int o = 0; o < d.num_outputs(); ++o) {
    const double r = ranges[static_cast<std::size_t>(o)];
    if (r > 0.0) {
      outputs.col(o) /= r;
    } else if (constant_columns != nullptr) {
      constant_columns->push_back(d.output_names()[static_cast<std::size_t>(o)]);
    }
  }
  return Dataset(d.dmu_ids(), d.inputs(), std::move(outputs), d.input_names(),
                 d.output_names());
}

Eigen::MatrixXd correlation_matrix(const Dataset& d) {
  const int K = d.num_dmus();
  const int O = d.num_outputs();
  if (K < 2) {
    throw DataError(DataErrorKind::TooFewRows,
                    "correlation needs at least 2 DMUs, got " + std::to_string(K));
  }
  Eigen::MatrixXd centered = d.outputs().rowwise() - d.outputs().colwise().mean();
  Eigen::VectorXd norms = centered.colwise().norm();
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(O, O);
  const double scale = std::max(1.0, d.outputs().cwiseAbs().maxCoeff());
  for (int a = 0; a < O; ++a) {
    if (norms(a) <= 1e-12 * scale) continue;
    for (int b = a; b < O; ++b) {
      if (norms(b) <= 1e-12 * scale) continue;
      double r = centered.col(a).dot(centered.col(b)) / (norms(a) * norms(b));
      r = std::clamp(r, -1.0, 1.0);
      rho(a, b) = r;
      rho(b, a) = r;
    }
    rho(a, a) = 1.0;
  }
  return rho;
}

Eigen::MatrixXi threshold_rule_matrix(const Eigen::MatrixXd& rho, double tau) {
  const auto n = rho.rows();
  Eigen::MatrixXi r = Eigen::MatrixXi::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      // A zero-variance column has rho = 0 against everything and is never
      // flagged, even for tau <= 0.
      const bool degenerate = rho(a, a) == 0.0 || rho(b, b) == 0.0;
      if (!degenerate && rho(a, b) >= tau) {
        r(a, b) = 1;
        r(b, a) = 1;
      }
    }
  }
  return r;
}

}  // namespace deafs
