#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "deafs/errors.hpp"
#include "deafs/solver.hpp"

namespace deafs::milp {

namespace {

// t + 2(a - e0) * sum(terms) >= a^2 - e0^2 - 2(a - e0) * c, the tangent of
// (a - e)^2 at e0 with e = sum(terms) + c.
void add_tangent(MilpModel& lin, const QuadraticTerm& q, int t, double e0, int index) {
  const double slope = 2.0 * (q.target - e0);
  std::vector<LinearTerm> terms{{t, 1.0}};
  for (const auto& term : q.terms) terms.push_back({term.var, slope * term.coef});
  const double rhs = q.target * q.target - e0 * e0 - slope * q.constant;
  lin.add_constraint("oa_" + q.name + "_" + std::to_string(index), std::move(terms),
                     Relation::GreaterEqual, rhs);
}

}  // namespace

SolveOutcome solve_convex_miqp(const MilpModel& model, const MilpOptions& options) {
  model.validate();
  if (!model.has_quadratic()) return solve_milp(model, options);

  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  MilpModel lin(Sense::Minimize);
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variable(j);
    lin.add_variable(v.name, v.kind, v.lower, v.upper, model.objective()[static_cast<std::size_t>(j)]);
  }
  lin.set_objective_offset(model.objective_offset());
  for (const auto& c : model.constraints()) lin.add_constraint(c.name, c.terms, c.relation, c.rhs);

  const auto& quad = model.quadratic_terms();
  std::vector<int> epigraph;
  std::vector<int> cut_count(quad.size(), 0);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const int t = lin.add_continuous("t_" + quad[q].name, 0.0, kInfinity, quad[q].weight);
    epigraph.push_back(t);
    const double lo = quad[q].expr_lower;
    const double hi = quad[q].expr_upper;
    for (double e0 : {lo, 0.5 * (lo + hi), hi}) add_tangent(lin, quad[q], t, e0, cut_count[q]++);
  }

  SolveOutcome best;
  best.status = SolveStatus::Infeasible;
  double best_true = kInfinity;
  double lower_bound = -kInfinity;
  std::vector<std::string> warnings;
  long nodes = 0;
  long iterations = 0;
  constexpr int kMaxRounds = 500;

  MilpOptions inner = options;
  inner.target.reset();
  for (int round = 0; round < kMaxRounds; ++round) {
    if (options.time_limit > 0.0) {
      const double left = options.time_limit - elapsed();
      if (left <= 0.0) {
        best.status = SolveStatus::TimeLimit;
        break;
      }
      inner.time_limit = left;
    }
    SolveOutcome r = solve_milp(lin, inner);
    nodes += r.nodes;
    iterations += r.lp_iterations;
    for (auto& w : r.warnings) warnings.push_back(std::move(w));
    if (r.status == SolveStatus::Infeasible || r.status == SolveStatus::Unbounded) {
      best.status = r.status;
      if (best_true < kInfinity) {
        // Valid cuts only remove points above the cutoff, so the incumbent
        // is either optimal or itself beyond the cutoff.
        const bool beyond = options.cutoff &&
                            best_true > *options.cutoff + 1e-9 * std::max(1.0, std::abs(*options.cutoff));
        best.status = beyond ? SolveStatus::Infeasible : SolveStatus::Optimal;
        if (beyond) {
          best_true = kInfinity;
          best.values.clear();
        } else {
          lower_bound = best_true;
        }
      }
      break;
    }
    if (!r.has_solution()) break;
    if (r.status == SolveStatus::Optimal) lower_bound = std::max(lower_bound, r.bound);

    std::vector<double> x(r.values.begin(), r.values.begin() + model.num_variables());
    const double true_value = model.evaluate_objective(x);
    if (true_value < best_true) {
      best_true = true_value;
      best.values = x;
    }

    double worst = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double e = evaluate_terms(quad[q].terms, r.values) + quad[q].constant;
      const double exact = (quad[q].target - e) * (quad[q].target - e);
      const double violation = exact - r.values[static_cast<std::size_t>(epigraph[q])];
      worst = std::max(worst, violation * quad[q].weight);
      if (violation >= 1e-7) add_tangent(lin, quad[q], epigraph[q], e, cut_count[q]++);
    }

    if (options.target && best_true <= *options.target + 1e-9 * std::max(1.0, std::abs(*options.target))) {
      best.status = SolveStatus::TargetReached;
      break;
    }
    if (r.status == SolveStatus::TimeLimit) {
      best.status = SolveStatus::TimeLimit;
      break;
    }
    const double gap = std::max(0.0, best_true - lower_bound) / std::max(1.0, std::abs(best_true));
    if (worst < 1e-7 || gap <= options.gap_tol) {
      best.status = SolveStatus::Optimal;
      break;
    }
    // Warm start the next round from the best assignment seen so far.
    inner.warm_start.clear();
    for (int j = 0; j < model.num_variables(); ++j) {
      if (model.variable(j).kind == VarKind::Binary) {
        inner.warm_start.emplace_back(j, best.values[static_cast<std::size_t>(j)]);
      }
    }
    if (round + 1 == kMaxRounds) {
      best.status = SolveStatus::TimeLimit;
      warnings.push_back("outer approximation stopped at the round limit");
    }
  }

  best.objective = best_true < kInfinity ? best_true : std::nan("");
  best.bound = std::min(lower_bound, best_true);
  best.gap = best_true < kInfinity && lower_bound > -kInfinity
                 ? std::max(0.0, best_true - lower_bound) / std::max(1.0, std::abs(best_true))
                 : 0.0;
  if (best.status == SolveStatus::TargetReached) best.gap = 0.0;
  best.nodes = nodes;
  best.lp_iterations = iterations;
  best.warnings = std::move(warnings);
  best.wall_time = elapsed();
  return best;
}

}  // namespace deafs::milp
