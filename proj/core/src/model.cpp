#include "deafs/model.hpp"

#include <algorithm>
#include <cmath>

#include "deafs/errors.hpp"

namespace deafs::milp {

int MilpModel::add_variable(std::string name, VarKind kind, double lower, double upper,
                            double objective) {
  const int idx = num_variables();
  if (!name.empty()) index_.emplace(name, idx);
  variables_.push_back({std::move(name), kind, lower, upper});
  objective_.push_back(objective);
  return idx;
}

int MilpModel::add_constraint(std::string name, std::vector<LinearTerm> terms,
                              Relation relation, double rhs) {
  constraints_.push_back({std::move(name), std::move(terms), relation, rhs});
  return num_constraints() - 1;
}

void MilpModel::add_quadratic_term(QuadraticTerm term) { quadratic_.push_back(std::move(term)); }

void MilpModel::set_bounds(int var, double lower, double upper) {
  auto& v = variables_.at(static_cast<std::size_t>(var));
  v.lower = lower;
  v.upper = upper;
}

int MilpModel::find_variable(const std::string& name) const {
  const auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

double evaluate_terms(const std::vector<LinearTerm>& terms, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& t : terms) s += t.coef * x[static_cast<std::size_t>(t.var)];
  return s;
}

double MilpModel::evaluate_objective(const std::vector<double>& x) const {
  double v = offset_;
  for (std::size_t j = 0; j < objective_.size(); ++j) v += objective_[j] * x[j];
  for (const auto& q : quadratic_) {
    const double e = evaluate_terms(q.terms, x) + q.constant;
    v += q.weight * (q.target - e) * (q.target - e);
  }
  return v;
}

double MilpModel::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    worst = std::max(worst, variables_[j].lower - x[j]);
    worst = std::max(worst, x[j] - variables_[j].upper);
  }
  for (const auto& c : constraints_) {
    const double a = evaluate_terms(c.terms, x);
    switch (c.relation) {
      case Relation::LessEqual: worst = std::max(worst, a - c.rhs); break;
      case Relation::GreaterEqual: worst = std::max(worst, c.rhs - a); break;
      case Relation::Equal: worst = std::max(worst, std::abs(a - c.rhs)); break;
    }
  }
  return worst;
}

void MilpModel::validate() const {
  auto fail = [](const std::string& msg) {
    throw SolverError(SolverErrorKind::InvalidModel, msg);
  };
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      fail("variable '" + v.name + "' has invalid bounds");
    }
    if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0)) {
      fail("binary variable '" + v.name + "' must have bounds within [0,1]");
    }
  }
  const int n = num_variables();
  auto check_terms = [&](const std::vector<LinearTerm>& terms, const std::string& owner) {
    for (const auto& t : terms) {
      if (t.var < 0 || t.var >= n) fail(owner + " references a missing variable");
      if (!std::isfinite(t.coef)) fail(owner + " has a non-finite coefficient");
    }
  };
  for (const auto& c : constraints_) {
    check_terms(c.terms, "constraint '" + c.name + "'");
    if (!std::isfinite(c.rhs)) fail("constraint '" + c.name + "' has a non-finite rhs");
  }
  for (double c : objective_) {
    if (!std::isfinite(c)) fail("objective has a non-finite coefficient");
  }
  if (!quadratic_.empty() && sense_ != Sense::Minimize) {
    fail("quadratic objective terms require a minimization sense");
  }
  for (const auto& q : quadratic_) {
    check_terms(q.terms, "quadratic term '" + q.name + "'");
    if (q.weight < 0.0) fail("quadratic term '" + q.name + "' has a negative weight");
  }
}

}  // namespace deafs::milp
