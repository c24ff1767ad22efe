#include "deafs/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>

#include "deafs/errors.hpp"
#include "deafs/formulation.hpp"
#include "deafs/greedy.hpp"

namespace deafs {

ActiveSet SelectionSolution::active_set(const Dataset& d) const {
  ActiveSet a = ActiveSet::with_outputs(d, selected_outputs);
  if (!selected_inputs.empty()) a.inputs = selected_inputs;
  return a;
}

bool objective_maximizes(const SelectionConfig& cfg, SelectionTarget target) {
  return target.mode == SelectionMode::Individual || cfg.objective != ObjectiveKind::Quadratic;
}

double objective_from_efficiencies(const SelectionConfig& cfg, SelectionTarget target,
                                   const std::vector<double>& e) {
  if (target.mode == SelectionMode::Individual) return e.at(static_cast<std::size_t>(target.dmu));
  const double K = static_cast<double>(e.size());
  switch (cfg.objective) {
    case ObjectiveKind::Average: {
      double s = 0.0;
      for (double v : e) s += v;
      return s / K;
    }
    case ObjectiveKind::Weighted: {
      double s = 0.0;
      for (std::size_t k = 0; k < e.size(); ++k) s += cfg.weights.at(k) * e[k];
      return s / K;
    }
    case ObjectiveKind::Quadratic: {
      double s = 0.0;
      for (double v : e) s += (1.0 - v) * (1.0 - v);
      return s / K;
    }
    case ObjectiveKind::Min:
      return *std::min_element(e.begin(), e.end());
    case ObjectiveKind::Percentile: {
      const int count = percentile_count(static_cast<int>(e.size()), cfg.pi);
      if (count < 1) throw ConfigError(ConfigErrorKind::BadPercentile, "floor(K*pi/100) = 0");
      std::vector<double> sorted = e;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      return sorted[static_cast<std::size_t>(count - 1)];
    }
  }
  return 0.0;
}

std::optional<std::vector<double>> selection_efficiencies(const Dataset& d, const SelectionConfig& cfg,
                                                          const ActiveSet& a) {
  try {
    return all_bounded_efficiencies(d, a, cfg.weight_bounds);
  } catch (const DataError& e) {
    if (e.kind() == DataErrorKind::NormalizationInfeasible) return std::nullopt;
    throw;
  }
}

namespace {

using Clock = std::chrono::steady_clock;

std::vector<int> chosen(const std::vector<double>& values, const std::vector<int>& vars, double tol,
                        std::vector<std::string>& warnings) {
  std::vector<int> out;
  for (std::size_t t = 0; t < vars.size(); ++t) {
    const double v = values[static_cast<std::size_t>(vars[t])];
    if (std::abs(v - std::round(v)) > tol) {
      warnings.push_back("binary " + std::to_string(t + 1) + " is " + std::to_string(v) +
                         ", beyond the rounding tolerance");
    }
    if (v > 0.5) out.push_back(static_cast<int>(t));
  }
  return out;
}

class SelectionRun {
 public:
  SelectionRun(const Dataset& d, const SelectionConfig& cfg, SelectionTarget target)
      : d_(d), cfg_(cfg), target_(target), start_(Clock::now()) {}

  SelectionSolution run() {
    SelectionModel sm = target_.mode == SelectionMode::Joint ? build_osdea_joint(d_, cfg_)
                                                              : build_osdea_individual(d_, target_.dmu, cfg_);
    milp::MilpOptions opt = base_options();
    add_warm_start(sm, opt);
    milp::SolveOutcome r = milp::solve(sm.model, opt);
    nodes_ += r.nodes;
    append(r.warnings);
    if (r.status == milp::SolveStatus::Infeasible) {
      throw InfeasibleError("no selection of p = " + std::to_string(cfg_.p) +
                            " outputs satisfies the constraints");
    }
    if (r.status == milp::SolveStatus::Unbounded) {
      throw SolverError(SolverErrorKind::NoSolution, "selection model is unbounded");
    }
    if (!r.has_solution()) {
      throw SolverError(SolverErrorKind::NoSolution, "time limit reached before any feasible selection");
    }
    const bool optimal = r.status == milp::SolveStatus::Optimal;
    const double gap = r.gap;
    if (optimal && cfg_.lex_ties) r = lexicographic_pass(sm, r);

    SelectionSolution s;
    s.selected_outputs = chosen(r.values, sm.z, 1e-6, warnings_);
    if (!sm.z_in.empty()) s.selected_inputs = chosen(r.values, sm.z_in, 1e-6, warnings_);
    s.status = optimal ? milp::SolveStatus::Optimal : r.status;
    s.optimal = optimal;
    s.gap = gap;
    s.solver_objective = r.objective;

    auto eff = selection_efficiencies(d_, cfg_, s.active_set(d_));
    if (!eff) {
      throw SolverError(SolverErrorKind::Inconsistent, "realized selection has an infeasible DEA LP");
    }
    s.efficiencies = std::move(*eff);
    s.objective_value = objective_from_efficiencies(cfg_, target_, s.efficiencies);
    check_consistency(sm, r, s);
    s.nodes = nodes_;
    s.warnings = std::move(warnings_);
    s.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
    return s;
  }

 private:
  double remaining() const {
    if (cfg_.time_limit <= 0.0) return 0.0;
    const double used = std::chrono::duration<double>(Clock::now() - start_).count();
    return std::max(1e-3, cfg_.time_limit - used);
  }

  milp::MilpOptions base_options() const {
    milp::MilpOptions opt;
    opt.time_limit = remaining();
    opt.gap_tol = cfg_.gap_tol;
    return opt;
  }

  void append(std::vector<std::string>& w) {
    for (auto& s : w) warnings_.push_back(std::move(s));
  }

  void add_warm_start(const SelectionModel& sm, milp::MilpOptions& opt) {
    const bool linear = cfg_.objective == ObjectiveKind::Average || cfg_.objective == ObjectiveKind::Weighted;
    if (target_.mode != SelectionMode::Joint || !linear || !cfg_.warm_start || cfg_.p_tilde ||
        !cfg_.weight_bounds.empty()) {
      return;
    }
    const GreedyTrace g = greedy_nested(d_, cfg_.p, cfg_.objective, cfg_.weights);
    const std::vector<int> set = g.prefix(g.order.size());
    if (!admissible_outputs(cfg_, set, conflict_pairs(cfg_, d_))) {
      warnings_.push_back("greedy selection violates the extensions; solving without a warm start");
      return;
    }
    std::vector<bool> in(sm.z.size(), false);
    for (int o : set) in[static_cast<std::size_t>(o)] = true;
    for (std::size_t o = 0; o < sm.z.size(); ++o) opt.warm_start.emplace_back(sm.z[o], in[o] ? 1.0 : 0.0);
  }

  // Walks the selection binaries in index order and keeps each one at 1 if
  // some optimal solution agrees with the decisions taken so far.
  milp::SolveOutcome lexicographic_pass(SelectionModel& sm, milp::SolveOutcome witness) {
    const double v = witness.objective;
    const double tol = 1e-9 * std::max(1.0, std::abs(v));
    const bool maximize = sm.model.sense() == milp::Sense::Maximize;
    const double pin = maximize ? v - tol : v + tol;

    auto sweep = [&](const std::vector<int>& vars, int budget) {
      int ones = 0;
      for (std::size_t t = 0; t < vars.size(); ++t) {
        const int var = vars[t];
        if (ones == budget) {
          sm.model.set_bounds(var, 0.0, 0.0);
          continue;
        }
        if (witness.values[static_cast<std::size_t>(var)] > 0.5) {
          sm.model.set_bounds(var, 1.0, 1.0);
          ++ones;
          continue;
        }
        const auto saved = sm.model.variable(var);
        if (saved.upper < 0.5) continue;
        sm.model.set_bounds(var, 1.0, 1.0);
        milp::MilpOptions opt = base_options();
        opt.cutoff = pin;
        opt.target = pin;
        const milp::SolveOutcome r = milp::solve(sm.model, opt);
        nodes_ += r.nodes;
        if (r.has_solution() &&
            (r.status == milp::SolveStatus::TargetReached || r.status == milp::SolveStatus::Optimal)) {
          witness = r;
          ++ones;
        } else if (r.status == milp::SolveStatus::Infeasible) {
          sm.model.set_bounds(var, saved.lower, 0.0);
        } else {
          sm.model.set_bounds(var, saved.lower, saved.upper);
          warnings_.push_back("tie-breaking pass stopped at the time limit");
          return false;
        }
      }
      return true;
    };
    if (sweep(sm.z, cfg_.p) && !sm.z_in.empty()) sweep(sm.z_in, *cfg_.p_tilde);
    return witness;
  }

  void check_consistency(const SelectionModel& sm, const milp::SolveOutcome& r, SelectionSolution& s) {
    double err = std::abs(s.objective_value - r.objective);
    const bool per_block = target_.mode == SelectionMode::Individual ||
                           cfg_.objective == ObjectiveKind::Average || cfg_.objective == ObjectiveKind::Quadratic ||
                           (cfg_.objective == ObjectiveKind::Weighted &&
                            std::all_of(cfg_.weights.begin(), cfg_.weights.end(), [](double w) { return w > 0.0; }));
    if (per_block && cfg_.objective != ObjectiveKind::Quadratic) {
      for (std::size_t b = 0; b < sm.dmus.size(); ++b) {
        const double e = milp::evaluate_terms(sm.efficiency_terms[b], r.values);
        err = std::max(err, std::abs(e - s.efficiencies[static_cast<std::size_t>(sm.dmus[b])]));
      }
    }
    s.consistency_error = err;
    // Outer approximation stops within the gap, so its values may trail the
    // exact efficiencies by that much.
    double allowed = 1e-6;
    if (cfg_.objective == ObjectiveKind::Quadratic && target_.mode == SelectionMode::Joint) {
      allowed += cfg_.gap_tol * std::max(1.0, std::abs(s.objective_value));
    }
    if (!s.optimal) allowed = milp::kInfinity;
    if (err > allowed) {
      warnings_.push_back("consistency check: solver and re-solved DEA efficiencies differ by " +
                          std::to_string(err));
    }
  }

  const Dataset& d_;
  const SelectionConfig& cfg_;
  SelectionTarget target_;
  Clock::time_point start_;
  long nodes_ = 0;
  std::vector<std::string> warnings_;
};

}  // namespace

SelectionSolution solve_selection(const Dataset& d, const SelectionConfig& cfg, SelectionTarget target) {
  return SelectionRun(d, cfg, target).run();
}

std::vector<SweepRow> sweep_p(const Dataset& d, const SelectionConfig& cfg, int p_min, int p_max,
                              SelectionTarget target) {
  if (p_min < 1 || p_max > d.num_outputs() || p_min > p_max) {
    throw ConfigError(ConfigErrorKind::BadValue, "p range must satisfy 1 <= p_min <= p_max <= " +
                                                     std::to_string(d.num_outputs()));
  }
  std::vector<SweepRow> rows;
  for (int p = p_min; p <= p_max; ++p) {
    SweepRow row;
    row.p = p;
    SelectionConfig c = cfg;
    c.p = p;
    try {
      row.solution = solve_selection(d, c, target);
      row.summary = summarize(row.solution->efficiencies);
    } catch (const InfeasibleError& e) {
      row.error = e.what();
      row.infeasible = true;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  for (std::size_t t = 0; t + 1 < rows.size(); ++t) {
    if (rows[t].solution && rows[t + 1].solution) {
      rows[t].marginal = rows[t + 1].solution->objective_value - rows[t].solution->objective_value;
    }
  }
  return rows;
}

}  // namespace deafs
