#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace deafs::milp {

class MilpModel;

/// minimize cost'x + offset subject to row_lower <= A x <= row_upper and
/// col_lower <= x <= col_upper, with A stored column-major (CSC).
struct LpProblem {
  int num_rows = 0;
  int num_cols = 0;
  std::vector<int> col_start{0};
  std::vector<int> row_index;
  std::vector<double> value;
  std::vector<double> cost;
  double cost_offset = 0.0;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
};

/// Linear relaxation of `model` in minimization form (binaries become
/// continuous on their bounds). Maximization is negated.
LpProblem make_lp(const MilpModel& model);

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, Free };

enum class LpStatus { Optimal, Infeasible, Unbounded, Cutoff, IterationLimit, TimeLimit };

const char* to_string(LpStatus status);

struct SimplexOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_interval = 64;
  /// Bland's rule takes over after this many consecutive degenerate pivots;
  /// 0 means 3 * (rows + columns).
  long bland_threshold = 0;
  long max_iterations = 0;  // 0: 100 * (rows + columns) + 10000
};

class BasisFactor;

/// Bounded revised simplex over the rows of an LpProblem plus one logical
/// variable per row (A x - r = 0, row bounds on r).
///
/// Primal phase 1 minimizes the sum of infeasibilities; phase 2 uses
/// Dantzig pricing with Bland's rule as the anti-cycling fallback. A dual
/// simplex pass (steepest-edge row choice, bound-flipping ratio test)
/// reoptimizes after bound changes when the basis is still dual feasible,
/// which is how branch-and-bound nodes are warm-started.
class SimplexSolver {
 public:
  explicit SimplexSolver(LpProblem lp, SimplexOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  int num_rows() const { return m_; }
  int num_cols() const { return n_; }

  void set_col_bounds(int j, double lower, double upper);
  double col_lower(int j) const { return lower_[static_cast<std::size_t>(j)]; }
  double col_upper(int j) const { return upper_[static_cast<std::size_t>(j)]; }

  /// Status of every structural and logical variable (n + m entries).
  std::vector<VarStatus> basis() const { return status_; }
  void set_basis(const std::vector<VarStatus>& statuses);
  void reset_basis();

  /// Solves from the current basis. `cutoff` (minimization value) lets the
  /// dual simplex stop early once the LP bound provably exceeds it.
  LpStatus solve(double cutoff = std::numeric_limits<double>::infinity(),
                 std::optional<std::chrono::steady_clock::time_point> deadline = {});

  double objective() const;
  std::vector<double> primal() const;  // structural values
  long iterations() const { return total_iterations_; }

 private:
  enum class PrimalResult { Optimal, Infeasible, Unbounded, Limit, Singular };
  enum class DualResult { Feasible, Infeasible, Cutoff, Limit, Singular, Unstable };

  bool refactor();
  void compute_primal();
  void compute_duals(const std::vector<double>& basic_cost);
  void compute_phase2_duals();
  void pivot_row(const Eigen::VectorXd& rho, std::vector<double>& row) const;
  double nonbasic_value(int j) const;
  void column_into(int j, Eigen::VectorXd& dense) const;
  double column_dot(int j, const Eigen::VectorXd& y) const;
  void pivot(int row, int entering, const Eigen::VectorXd& alpha, VarStatus leaving_status);
  bool dual_feasible() const;
  bool limits_hit();

  PrimalResult run_primal();
  DualResult run_dual(double cutoff);

  LpProblem lp_;
  SimplexOptions opt_;
  int m_ = 0;
  int n_ = 0;
  std::vector<double> lower_;  // n + m
  std::vector<double> upper_;
  std::vector<double> cost_;   // n + m (logicals 0)
  std::vector<VarStatus> status_;
  std::vector<int> head_;      // basic variable per row position
  std::vector<double> x_;      // n + m
  std::vector<int> row_start_;  // row-wise copy of A
  std::vector<int> row_col_;
  std::vector<double> row_val_;
  std::vector<double> dse_weight_;  // dual steepest-edge weight per row position
  Eigen::VectorXd dj_;         // reduced costs, phase 2
  std::unique_ptr<BasisFactor> factor_;
  bool factored_ = false;
  bool primal_dirty_ = true;
  long total_iterations_ = 0;
  long iteration_budget_ = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  bool time_out_ = false;
};

}  // namespace deafs::milp
