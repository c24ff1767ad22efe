#pragma once

#include <stdexcept>
#include <string>

namespace deafs {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DataErrorKind {
  MissingColumn,
  NegativeValue,
  NonNumericCell,
  DuplicateDmuId,
  EmptyDataset,
  InvariantViolation,
  TooFewRows,
  EmptyVector,
  NormalizationInfeasible,
  Io,
};

const char* to_string(DataErrorKind kind);

/// Malformed or out-of-contract input data. `row` and `column` are 1-based
/// positions in the source table when known, 0 otherwise.
class DataError : public Error {
 public:
  DataError(DataErrorKind kind, const std::string& message, int row = 0,
            int column = 0)
      : Error(message), kind_(kind), row_(row), column_(column) {}

  DataErrorKind kind() const { return kind_; }
  int row() const { return row_; }
  int column() const { return column_; }

 private:
  DataErrorKind kind_;
  int row_;
  int column_;
};

enum class ConfigErrorKind { Syntax, BadValue, BadWeights, BadPercentile };

class ConfigError : public Error {
 public:
  ConfigError(ConfigErrorKind kind, const std::string& message)
      : Error(message), kind_(kind) {}
  ConfigErrorKind kind() const { return kind_; }

 private:
  ConfigErrorKind kind_;
};

/// The requested selection problem has no feasible solution. The message
/// carries the violated arithmetic when it can be detected up front.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

enum class SolverErrorKind { NumericalBreakdown, InvalidModel, NoSolution, Inconsistent };

class SolverError : public Error {
 public:
  SolverError(SolverErrorKind kind, const std::string& message)
      : Error(message), kind_(kind) {}
  SolverErrorKind kind() const { return kind_; }

 private:
  SolverErrorKind kind_;
};

/// Brute-force enumeration would exceed its configured subset budget.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace deafs
