#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <queue>

#include "deafs/errors.hpp"
#include "deafs/simplex.hpp"
#include "deafs/solver.hpp"

namespace deafs::milp {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::TargetReached: return "TargetReached";
  }
  return "Unknown";
}

double SolveOutcome::value(const MilpModel& model, const std::string& name) const {
  const int j = model.find_variable(name);
  if (j < 0 || static_cast<std::size_t>(j) >= values.size()) {
    throw SolverError(SolverErrorKind::NoSolution, "no value for variable '" + name + "'");
  }
  return values[static_cast<std::size_t>(j)];
}

std::map<std::string, double> SolveOutcome::named_values(const MilpModel& model) const {
  std::map<std::string, double> out;
  for (std::size_t j = 0; j < values.size() && j < model.variables().size(); ++j) {
    out.emplace(model.variables()[j].name, values[j]);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::optional<Clock::time_point> deadline_for(Clock::time_point start, double limit) {
  if (limit <= 0.0) return std::nullopt;
  return start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(limit));
}

double relative_gap(double incumbent, double bound) {
  return std::max(0.0, incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

struct Node {
  double bound;  // minimization form
  long seq;
  long parent;
  std::vector<std::int8_t> fix;  // per binary: -1 free, 0, 1
  std::shared_ptr<const std::vector<VarStatus>> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq < b.seq;  // newest first among equal bounds
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const MilpOptions& options)
      : model_(model),
        opt_(options),
        start_(Clock::now()),
        deadline_(deadline_for(start_, options.time_limit)),
        sign_(model.sense() == Sense::Maximize ? -1.0 : 1.0),
        solver_(make_lp(model)) {
    for (int j = 0; j < model.num_variables(); ++j) {
      if (model.variable(j).kind == VarKind::Binary) binaries_.push_back(j);
    }
    if (opt_.cutoff) cutoff_ = sign_ * *opt_.cutoff;
    if (opt_.target) target_ = sign_ * *opt_.target;
  }

  SolveOutcome run() {
    try_warm_start();
    if (done_) return finish(SolveStatus::TargetReached);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{-kInfinity, seq_++, -1, std::vector<std::int8_t>(binaries_.size(), -1), nullptr});
    long last = -2;
    double pruned_bound = kInfinity;  // smallest bound discarded by the gap rule

    while (!open.empty()) {
      if (deadline_ && Clock::now() > *deadline_) {
        double bound = pruned_bound;
        while (!open.empty()) {
          bound = std::min(bound, open.top().bound);
          open.pop();
        }
        return finish(SolveStatus::TimeLimit, bound);
      }
      Node node = open.top();
      open.pop();
      if (has_incumbent() && node.bound >= incumbent_) continue;
      if (has_incumbent() && relative_gap(incumbent_, node.bound) <= opt_.gap_tol) {
        pruned_bound = std::min(pruned_bound, node.bound);
        continue;
      }
      ++nodes_;

      apply(node.fix);
      if (node.parent != last && node.basis) solver_.set_basis(*node.basis);
      last = node.seq;
      const LpStatus st = solver_.solve(std::min(incumbent_, cutoff_), deadline_);
      if (st == LpStatus::TimeLimit) {
        open.push(node);
        continue;
      }
      if (st == LpStatus::IterationLimit) {
        warnings_.push_back("node LP hit the iteration limit; subtree discarded");
        continue;
      }
      if (st == LpStatus::Unbounded) {
        if (nodes_ == 1) return finish(SolveStatus::Unbounded);
        continue;
      }
      if (st != LpStatus::Optimal) continue;
      const double value = solver_.objective();
      if (value > cutoff_ + tol(cutoff_)) continue;
      if (has_incumbent()) {
        if (value >= incumbent_) continue;
        if (relative_gap(incumbent_, value) <= opt_.gap_tol) {
          pruned_bound = std::min(pruned_bound, value);
          continue;
        }
      }

      const std::vector<double> x = solver_.primal();
      int branch = -1;
      double best_frac = opt_.integrality_tol;
      for (std::size_t b = 0; b < binaries_.size(); ++b) {
        const double v = x[static_cast<std::size_t>(binaries_[b])];
        const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
        if (frac > best_frac) {
          best_frac = frac;
          branch = static_cast<int>(b);
        }
      }

      if (branch < 0) {
        std::vector<std::int8_t> fix(binaries_.size());
        for (std::size_t b = 0; b < binaries_.size(); ++b) {
          fix[b] = x[static_cast<std::size_t>(binaries_[b])] > 0.5 ? 1 : 0;
        }
        try_integral(fix);
        last = -2;
        if (done_) return finish(SolveStatus::TargetReached);
        continue;
      }

      auto basis = std::make_shared<const std::vector<VarStatus>>(solver_.basis());
      Node down{value, seq_++, node.seq, node.fix, basis};
      down.fix[static_cast<std::size_t>(branch)] = 0;
      Node up{value, seq_++, node.seq, std::move(node.fix), basis};
      up.fix[static_cast<std::size_t>(branch)] = 1;
      open.push(std::move(down));
      open.push(std::move(up));
    }
    if (!has_incumbent()) return finish(SolveStatus::Infeasible);
    return finish(SolveStatus::Optimal, std::min(pruned_bound, incumbent_));
  }

 private:
  static double tol(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }
  bool has_incumbent() const { return !best_.empty(); }

  void apply(const std::vector<std::int8_t>& fix) {
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      const int j = binaries_[b];
      const Variable& v = model_.variable(j);
      switch (fix[b]) {
        case 0: solver_.set_col_bounds(j, 0.0, std::min(0.0, v.upper)); break;
        case 1: solver_.set_col_bounds(j, std::max(1.0, v.lower), 1.0); break;
        default: solver_.set_col_bounds(j, v.lower, v.upper); break;
      }
    }
  }

  // Re-solves with every binary fixed and records an improving incumbent.
  bool try_integral(const std::vector<std::int8_t>& fix) {
    apply(fix);
    const LpStatus st = solver_.solve(kInfinity, deadline_);
    if (st != LpStatus::Optimal) return false;
    std::vector<double> x = solver_.primal();
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      x[static_cast<std::size_t>(binaries_[b])] = fix[b];
    }
    if (model_.max_violation(x) > 1e-7) {
      warnings_.push_back("integral candidate rejected: constraint violation above 1e-7");
      return false;
    }
    const double value = solver_.objective();
    if (value > cutoff_ + tol(cutoff_)) return false;
    if (has_incumbent() && value >= incumbent_) return true;
    incumbent_ = value;
    best_ = std::move(x);
    if (target_ && incumbent_ <= *target_ + tol(*target_)) done_ = true;
    return true;
  }

  void try_warm_start() {
    if (opt_.warm_start.empty()) return;
    std::vector<std::int8_t> fix(binaries_.size(), -1);
    for (const auto& [var, value] : opt_.warm_start) {
      const auto it = std::find(binaries_.begin(), binaries_.end(), var);
      if (it == binaries_.end()) continue;
      const std::int8_t f = value > 0.5 ? 1 : 0;
      const Variable& v = model_.variable(var);
      if (f < v.lower || f > v.upper) {
        warnings_.push_back("InvalidIncumbent: warm start violates variable bounds and was ignored");
        return;
      }
      fix[static_cast<std::size_t>(it - binaries_.begin())] = f;
    }
    apply(fix);
    const LpStatus st = solver_.solve(kInfinity, deadline_);
    bool ok = st == LpStatus::Optimal;
    if (ok) {
      const std::vector<double> x = solver_.primal();
      for (std::size_t b = 0; b < binaries_.size() && ok; ++b) {
        const double v = x[static_cast<std::size_t>(binaries_[b])];
        if (fix[b] < 0) {
          fix[b] = v > 0.5 ? 1 : 0;
          ok = std::abs(v - fix[b]) <= opt_.integrality_tol;
        }
      }
    }
    if (ok) ok = try_integral(fix);
    if (!ok) warnings_.push_back("InvalidIncumbent: warm start is infeasible and was ignored");
    solver_.reset_basis();
  }

  SolveOutcome finish(SolveStatus status, double bound_min = kInfinity) {
    SolveOutcome out;
    out.status = status;
    out.nodes = nodes_;
    out.lp_iterations = solver_.iterations();
    out.warnings = std::move(warnings_);
    if (has_incumbent()) {
      out.values = std::move(best_);
      out.objective = sign_ * incumbent_;
      const double b = std::min(bound_min, incumbent_);
      out.bound = sign_ * b;
      out.gap = status == SolveStatus::TargetReached ? 0.0 : relative_gap(incumbent_, b);
    } else {
      out.objective = status == SolveStatus::Unbounded ? -sign_ * kInfinity : std::nan("");
      out.bound = sign_ * bound_min;
    }
    out.wall_time = seconds_since(start_);
    return out;
  }

  const MilpModel& model_;
  MilpOptions opt_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
  double sign_;
  SimplexSolver solver_;
  std::vector<int> binaries_;
  double cutoff_ = kInfinity;
  std::optional<double> target_;
  double incumbent_ = kInfinity;
  std::vector<double> best_;
  std::vector<std::string> warnings_;
  long nodes_ = 0;
  long seq_ = 0;
  bool done_ = false;
};

}  // namespace

SolveOutcome solve_lp(const MilpModel& model, double time_limit) {
  model.validate();
  if (model.has_quadratic()) {
    throw SolverError(SolverErrorKind::InvalidModel, "solve_lp does not accept quadratic terms");
  }
  const auto start = Clock::now();
  SimplexSolver solver(make_lp(model));
  const LpStatus st = solver.solve(kInfinity, deadline_for(start, time_limit));
  const double sign = model.sense() == Sense::Maximize ? -1.0 : 1.0;
  SolveOutcome out;
  out.nodes = 1;
  out.lp_iterations = solver.iterations();
  switch (st) {
    case LpStatus::Optimal:
      out.status = SolveStatus::Optimal;
      out.values = solver.primal();
      out.objective = sign * solver.objective();
      out.bound = out.objective;
      break;
    case LpStatus::Infeasible:
      out.status = SolveStatus::Infeasible;
      out.objective = std::nan("");
      break;
    case LpStatus::Unbounded:
      out.status = SolveStatus::Unbounded;
      out.objective = -sign * kInfinity;
      break;
    case LpStatus::TimeLimit:
    case LpStatus::IterationLimit:
    case LpStatus::Cutoff:
      out.status = SolveStatus::TimeLimit;
      out.objective = std::nan("");
      break;
  }
  out.wall_time = seconds_since(start);
  return out;
}

SolveOutcome solve_milp(const MilpModel& model, const MilpOptions& options) {
  model.validate();
  if (model.has_quadratic()) {
    throw SolverError(SolverErrorKind::InvalidModel,
                      "model has quadratic terms; use solve_convex_miqp");
  }
  return BranchAndBound(model, options).run();
}

SolveOutcome solve(const MilpModel& model, const MilpOptions& options) {
  return model.has_quadratic() ? solve_convex_miqp(model, options) : solve_milp(model, options);
}

}  // namespace deafs::milp
