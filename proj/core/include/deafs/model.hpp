#pragma once

#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace deafs::milp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInfinity;
};

struct LinearTerm {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// weight * (target - e)^2 where e = sum(terms) + constant.
/// [expr_lower, expr_upper] bounds e over the feasible region and places the
/// initial tangents of the outer approximation.
struct QuadraticTerm {
  std::string name;
  double target = 1.0;
  std::vector<LinearTerm> terms;
  double constant = 0.0;
  double weight = 1.0;
  double expr_lower = 0.0;
  double expr_upper = 1.0;
};

/// Variables, sparse linear constraints and a linear objective with optional
/// convex separable quadratic terms (minimization only).
class MilpModel {
 public:
  explicit MilpModel(Sense sense = Sense::Maximize) : sense_(sense) {}

  int add_variable(std::string name, VarKind kind, double lower, double upper,
                   double objective = 0.0);
  int add_continuous(std::string name, double lower, double upper, double objective = 0.0) {
    return add_variable(std::move(name), VarKind::Continuous, lower, upper, objective);
  }
  int add_binary(std::string name, double objective = 0.0) {
    return add_variable(std::move(name), VarKind::Binary, 0.0, 1.0, objective);
  }

  int add_constraint(std::string name, std::vector<LinearTerm> terms, Relation relation,
                     double rhs);
  void add_quadratic_term(QuadraticTerm term);

  void set_sense(Sense sense) { sense_ = sense; }
  void set_objective(int var, double coef) { objective_.at(static_cast<std::size_t>(var)) = coef; }
  void set_objective_offset(double offset) { offset_ = offset; }
  void set_bounds(int var, double lower, double upper);

  Sense sense() const { return sense_; }
  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int j) const { return variables_.at(static_cast<std::size_t>(j)); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<double>& objective() const { return objective_; }
  double objective_offset() const { return offset_; }
  const std::vector<QuadraticTerm>& quadratic_terms() const { return quadratic_; }
  bool has_quadratic() const { return !quadratic_.empty(); }

  /// -1 if no variable carries that name.
  int find_variable(const std::string& name) const;

  /// Linear part plus quadratic terms at `x`.
  double evaluate_objective(const std::vector<double>& x) const;
  /// Largest absolute violation of any constraint or variable bound at `x`.
  double max_violation(const std::vector<double>& x) const;

  /// Throws SolverError(InvalidModel) when a structural invariant is broken.
  void validate() const;

 private:
  Sense sense_;
  std::vector<Variable> variables_;
  std::vector<double> objective_;
  double offset_ = 0.0;
  std::vector<Constraint> constraints_;
  std::vector<QuadraticTerm> quadratic_;
  std::unordered_map<std::string, int> index_;
};

double evaluate_terms(const std::vector<LinearTerm>& terms, const std::vector<double>& x);

}  // namespace deafs::milp
