#include "deafs/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/SparseCore>

#include "basis_factor.hpp"
#include "deafs/errors.hpp"
#include "deafs/model.hpp"

namespace deafs::milp {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::Cutoff: return "Cutoff";
    case LpStatus::IterationLimit: return "IterationLimit";
    case LpStatus::TimeLimit: return "TimeLimit";
  }
  return "Unknown";
}

LpProblem make_lp(const MilpModel& model) {
  LpProblem lp;
  const int n = model.num_variables();
  const int m = model.num_constraints();
  lp.num_cols = n;
  lp.num_rows = m;
  const double sign = model.sense() == Sense::Maximize ? -1.0 : 1.0;
  lp.cost.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) lp.cost[static_cast<std::size_t>(j)] = sign * model.objective()[static_cast<std::size_t>(j)];
  lp.cost_offset = sign * model.objective_offset();
  for (const auto& v : model.variables()) {
    lp.col_lower.push_back(v.lower);
    lp.col_upper.push_back(v.upper);
  }

  // Transpose row-wise terms into CSC, merging duplicate entries.
  std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(n));
  int row = 0;
  for (const auto& c : model.constraints()) {
    std::map<int, double> merged;
    for (const auto& t : c.terms) merged[t.var] += t.coef;
    for (const auto& [var, coef] : merged) {
      if (coef != 0.0) cols[static_cast<std::size_t>(var)].emplace_back(row, coef);
    }
    switch (c.relation) {
      case Relation::LessEqual:
        lp.row_lower.push_back(-kInfinity);
        lp.row_upper.push_back(c.rhs);
        break;
      case Relation::GreaterEqual:
        lp.row_lower.push_back(c.rhs);
        lp.row_upper.push_back(kInfinity);
        break;
      case Relation::Equal:
        lp.row_lower.push_back(c.rhs);
        lp.row_upper.push_back(c.rhs);
        break;
    }
    ++row;
  }
  lp.col_start.assign(1, 0);
  for (const auto& col : cols) {
    for (const auto& [r, v] : col) {
      lp.row_index.push_back(r);
      lp.value.push_back(v);
    }
    lp.col_start.push_back(static_cast<int>(lp.row_index.size()));
  }
  return lp;
}

SimplexSolver::SimplexSolver(LpProblem lp, SimplexOptions options)
    : lp_(std::move(lp)), opt_(options), m_(lp_.num_rows), n_(lp_.num_cols) {
  const auto total = static_cast<std::size_t>(n_ + m_);
  lower_.resize(total);
  upper_.resize(total);
  cost_.assign(total, 0.0);
  for (int j = 0; j < n_; ++j) {
    lower_[static_cast<std::size_t>(j)] = lp_.col_lower[static_cast<std::size_t>(j)];
    upper_[static_cast<std::size_t>(j)] = lp_.col_upper[static_cast<std::size_t>(j)];
    cost_[static_cast<std::size_t>(j)] = lp_.cost[static_cast<std::size_t>(j)];
  }
  for (int i = 0; i < m_; ++i) {
    lower_[static_cast<std::size_t>(n_ + i)] = lp_.row_lower[static_cast<std::size_t>(i)];
    upper_[static_cast<std::size_t>(n_ + i)] = lp_.row_upper[static_cast<std::size_t>(i)];
  }
  if (opt_.bland_threshold <= 0) opt_.bland_threshold = 3L * (m_ + n_);
  if (opt_.max_iterations <= 0) opt_.max_iterations = 100L * (m_ + n_) + 10000;
  x_.assign(total, 0.0);
  row_start_.assign(static_cast<std::size_t>(m_) + 1, 0);
  for (int r : lp_.row_index) ++row_start_[static_cast<std::size_t>(r) + 1];
  for (int i = 0; i < m_; ++i) row_start_[static_cast<std::size_t>(i) + 1] += row_start_[static_cast<std::size_t>(i)];
  row_col_.resize(lp_.row_index.size());
  row_val_.resize(lp_.row_index.size());
  {
    std::vector<int> fill(row_start_.begin(), row_start_.end() - 1);
    for (int j = 0; j < n_; ++j) {
      for (int p = lp_.col_start[static_cast<std::size_t>(j)]; p < lp_.col_start[static_cast<std::size_t>(j) + 1]; ++p) {
        const auto at = static_cast<std::size_t>(fill[static_cast<std::size_t>(lp_.row_index[static_cast<std::size_t>(p)])]++);
        row_col_[at] = j;
        row_val_[at] = lp_.value[static_cast<std::size_t>(p)];
      }
    }
  }
  head_.assign(static_cast<std::size_t>(m_), 0);
  factor_ = std::make_unique<BasisFactor>();
  reset_basis();
}

SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

namespace {

VarStatus nonbasic_status(double lower, double upper, VarStatus preferred) {
  if (preferred == VarStatus::AtUpper && std::isfinite(upper)) return VarStatus::AtUpper;
  if (std::isfinite(lower)) return VarStatus::AtLower;
  if (std::isfinite(upper)) return VarStatus::AtUpper;
  return VarStatus::Free;
}

}  // namespace

void SimplexSolver::reset_basis() {
  status_.assign(static_cast<std::size_t>(n_ + m_), VarStatus::Basic);
  for (int j = 0; j < n_; ++j) {
    status_[static_cast<std::size_t>(j)] =
        nonbasic_status(lower_[static_cast<std::size_t>(j)], upper_[static_cast<std::size_t>(j)],
                        VarStatus::AtLower);
  }
  for (int i = 0; i < m_; ++i) head_[static_cast<std::size_t>(i)] = n_ + i;
  dse_weight_.assign(static_cast<std::size_t>(m_), 1.0);
  factored_ = false;
  primal_dirty_ = true;
}

void SimplexSolver::set_basis(const std::vector<VarStatus>& statuses) {
  if (statuses.size() != static_cast<std::size_t>(n_ + m_)) {
    reset_basis();
    return;
  }
  std::vector<int> head;
  head.reserve(static_cast<std::size_t>(m_));
  for (int j = 0; j < n_ + m_; ++j) {
    if (statuses[static_cast<std::size_t>(j)] == VarStatus::Basic) head.push_back(j);
  }
  if (head.size() != static_cast<std::size_t>(m_)) {
    reset_basis();
    return;
  }
  status_ = statuses;
  for (int j = 0; j < n_ + m_; ++j) {
    auto& st = status_[static_cast<std::size_t>(j)];
    if (st != VarStatus::Basic) {
      st = nonbasic_status(lower_[static_cast<std::size_t>(j)], upper_[static_cast<std::size_t>(j)], st);
    }
  }
  head_ = std::move(head);
  dse_weight_.assign(static_cast<std::size_t>(m_), 1.0);
  factored_ = false;
  primal_dirty_ = true;
}

void SimplexSolver::set_col_bounds(int j, double lower, double upper) {
  const auto idx = static_cast<std::size_t>(j);
  lower_[idx] = lower;
  upper_[idx] = upper;
  if (status_[idx] != VarStatus::Basic) status_[idx] = nonbasic_status(lower, upper, status_[idx]);
  primal_dirty_ = true;
}

double SimplexSolver::nonbasic_value(int j) const {
  const auto idx = static_cast<std::size_t>(j);
  switch (status_[idx]) {
    case VarStatus::AtLower: return lower_[idx];
    case VarStatus::AtUpper: return upper_[idx];
    default: return 0.0;
  }
}

void SimplexSolver::column_into(int j, Eigen::VectorXd& dense) const {
  dense.setZero(m_);
  if (j < n_) {
    for (int p = lp_.col_start[static_cast<std::size_t>(j)]; p < lp_.col_start[static_cast<std::size_t>(j) + 1]; ++p) {
      dense[lp_.row_index[static_cast<std::size_t>(p)]] = lp_.value[static_cast<std::size_t>(p)];
    }
  } else {
    dense[j - n_] = -1.0;
  }
}

double SimplexSolver::column_dot(int j, const Eigen::VectorXd& y) const {
  if (j >= n_) return -y[j - n_];
  double s = 0.0;
  for (int p = lp_.col_start[static_cast<std::size_t>(j)]; p < lp_.col_start[static_cast<std::size_t>(j) + 1]; ++p) {
    s += lp_.value[static_cast<std::size_t>(p)] * y[lp_.row_index[static_cast<std::size_t>(p)]];
  }
  return s;
}

bool SimplexSolver::refactor() {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m_) * 2);
  for (int pos = 0; pos < m_; ++pos) {
    const int j = head_[static_cast<std::size_t>(pos)];
    if (j < n_) {
      for (int p = lp_.col_start[static_cast<std::size_t>(j)]; p < lp_.col_start[static_cast<std::size_t>(j) + 1]; ++p) {
        triplets.emplace_back(lp_.row_index[static_cast<std::size_t>(p)], pos, lp_.value[static_cast<std::size_t>(p)]);
      }
    } else {
      triplets.emplace_back(j - n_, pos, -1.0);
    }
  }
  Eigen::SparseMatrix<double> basis(m_, m_);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  basis.makeCompressed();
  factored_ = factor_->factorize(basis);
  primal_dirty_ = true;
  return factored_;
}

void SimplexSolver::compute_primal() {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < n_ + m_; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    if (status_[idx] == VarStatus::Basic) continue;
    const double v = nonbasic_value(j);
    x_[idx] = v;
    if (v == 0.0) continue;
    if (j < n_) {
      for (int p = lp_.col_start[idx]; p < lp_.col_start[idx + 1]; ++p) {
        rhs[lp_.row_index[static_cast<std::size_t>(p)]] -= lp_.value[static_cast<std::size_t>(p)] * v;
      }
    } else {
      rhs[j - n_] += v;
    }
  }
  if (m_ > 0) factor_->ftran(rhs);
  for (int i = 0; i < m_; ++i) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] = rhs[i];
  primal_dirty_ = false;
}

void SimplexSolver::compute_duals(const std::vector<double>& basic_cost) {
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(basic_cost.data(), m_);
  if (m_ > 0) factor_->btran(y);
  dj_.resize(n_ + m_);
  for (int j = 0; j < n_ + m_; ++j) {
    dj_[j] = status_[static_cast<std::size_t>(j)] == VarStatus::Basic
                 ? 0.0
                 : cost_[static_cast<std::size_t>(j)] - column_dot(j, y);
  }
}

void SimplexSolver::compute_phase2_duals() {
  std::vector<double> cb(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    cb[static_cast<std::size_t>(i)] = cost_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])];
  }
  compute_duals(cb);
}

// row[j] = rho' a_j for every column, structural and logical.
void SimplexSolver::pivot_row(const Eigen::VectorXd& rho, std::vector<double>& row) const {
  row.assign(static_cast<std::size_t>(n_ + m_), 0.0);
  for (int i = 0; i < m_; ++i) {
    const double r = rho[i];
    if (r == 0.0) continue;
    row[static_cast<std::size_t>(n_ + i)] = -r;
    for (int p = row_start_[static_cast<std::size_t>(i)]; p < row_start_[static_cast<std::size_t>(i) + 1]; ++p) {
      row[static_cast<std::size_t>(row_col_[static_cast<std::size_t>(p)])] += r * row_val_[static_cast<std::size_t>(p)];
    }
  }
}

bool SimplexSolver::dual_feasible() const {
  constexpr double kTol = 1e-7;
  for (int j = 0; j < n_ + m_; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    if (status_[idx] == VarStatus::Basic || lower_[idx] == upper_[idx]) continue;
    const double d = dj_[j];
    switch (status_[idx]) {
      case VarStatus::AtLower: if (d < -kTol) return false; break;
      case VarStatus::AtUpper: if (d > kTol) return false; break;
      case VarStatus::Free: if (std::abs(d) > kTol) return false; break;
      default: break;
    }
  }
  return true;
}

void SimplexSolver::pivot(int row, int entering, const Eigen::VectorXd& alpha,
                          VarStatus leaving_status) {
  const int leaving = head_[static_cast<std::size_t>(row)];
  status_[static_cast<std::size_t>(leaving)] = leaving_status;
  head_[static_cast<std::size_t>(row)] = entering;
  status_[static_cast<std::size_t>(entering)] = VarStatus::Basic;
  factor_->push_eta(row, alpha);
  if (factor_->num_etas() >= static_cast<std::size_t>(opt_.refactor_interval)) {
    factored_ = false;
  }
}

bool SimplexSolver::limits_hit() {
  if (total_iterations_ >= iteration_budget_) return true;
  if (deadline_ && (total_iterations_ & 31) == 0 && std::chrono::steady_clock::now() > *deadline_) {
    time_out_ = true;
    return true;
  }
  return false;
}

SimplexSolver::PrimalResult SimplexSolver::run_primal() {
  long degenerate = 0;
  double feas_tol = opt_.primal_tol;
  bool fresh = false;  // x_ recomputed from scratch since the last pivot
  std::vector<double> cb(static_cast<std::size_t>(m_));
  Eigen::VectorXd y(m_);
  Eigen::VectorXd alpha(m_);

  while (true) {
    if (limits_hit()) return PrimalResult::Limit;
    if (!factored_) {
      if (!refactor()) return PrimalResult::Singular;
    }
    if (primal_dirty_) {
      compute_primal();
      fresh = true;
    }

    bool phase1 = false;
    for (int i = 0; i < m_; ++i) {
      const auto b = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
      if (x_[b] < lower_[b] - feas_tol || x_[b] > upper_[b] + feas_tol) {
        phase1 = true;
        break;
      }
    }
    for (int i = 0; i < m_; ++i) {
      const auto b = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
      if (phase1) {
        cb[static_cast<std::size_t>(i)] =
            x_[b] < lower_[b] - feas_tol ? -1.0 : (x_[b] > upper_[b] + feas_tol ? 1.0 : 0.0);
      } else {
        cb[static_cast<std::size_t>(i)] = cost_[b];
      }
    }
    y = Eigen::Map<const Eigen::VectorXd>(cb.data(), m_);
    if (m_ > 0) factor_->btran(y);

    const bool bland = degenerate > opt_.bland_threshold;
    int q = -1;
    int dir = 0;
    double best = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const auto idx = static_cast<std::size_t>(j);
      const VarStatus st = status_[idx];
      if (st == VarStatus::Basic || lower_[idx] == upper_[idx]) continue;
      const double d = (phase1 ? 0.0 : cost_[idx]) - column_dot(j, y);
      int s = 0;
      if ((st == VarStatus::AtLower || st == VarStatus::Free) && d < -opt_.dual_tol) {
        s = 1;
      } else if ((st == VarStatus::AtUpper || st == VarStatus::Free) && d > opt_.dual_tol) {
        s = -1;
      } else {
        continue;
      }
      if (bland) {
        q = j;
        dir = s;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dir = s;
      }
    }

    if (q < 0) {
      if (!fresh) {
        primal_dirty_ = true;  // confirm on a recomputed solution
        continue;
      }
      if (!phase1) return PrimalResult::Optimal;
      double worst = 0.0;
      for (int i = 0; i < m_; ++i) {
        const auto b = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
        worst = std::max({worst, lower_[b] - x_[b], x_[b] - upper_[b]});
      }
      if (worst <= 1e-7 && feas_tol < 1e-7) {
        feas_tol = 1e-7;
        continue;
      }
      return PrimalResult::Infeasible;
    }

    column_into(q, alpha);
    if (m_ > 0) factor_->ftran(alpha);

    const auto qidx = static_cast<std::size_t>(q);
    double flip = kInfinity;
    if (std::isfinite(lower_[qidx]) && std::isfinite(upper_[qidx])) flip = upper_[qidx] - lower_[qidx];

    // Harris two-pass ratio test (textbook minimum ratio under Bland).
    struct Candidate {
      int row;
      double limit;
      double slack_limit;
      VarStatus status;
      double magnitude;
    };
    std::vector<Candidate> candidates;
    double bound = flip;
    for (int i = 0; i < m_; ++i) {
      const double a = alpha[i];
      if (std::abs(a) < opt_.pivot_tol) continue;
      const double rate = -dir * a;
      const auto b = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
      const double xb = x_[b];
      double dist = 0.0;
      VarStatus st{};
      if (rate < 0.0) {
        if (phase1 && xb > upper_[b] + feas_tol) {
          dist = xb - upper_[b];
          st = VarStatus::AtUpper;
        } else if (xb < lower_[b] - feas_tol || !std::isfinite(lower_[b])) {
          continue;
        } else {
          dist = std::max(0.0, xb - lower_[b]);
          st = VarStatus::AtLower;
        }
      } else {
        if (phase1 && xb < lower_[b] - feas_tol) {
          dist = lower_[b] - xb;
          st = VarStatus::AtLower;
        } else if (xb > upper_[b] + feas_tol || !std::isfinite(upper_[b])) {
          continue;
        } else {
          dist = std::max(0.0, upper_[b] - xb);
          st = VarStatus::AtUpper;
        }
      }
      const double mag = std::abs(rate);
      const double limit = dist / mag;
      const double relaxed = bland ? limit : (dist + feas_tol) / mag;
      candidates.push_back({i, limit, relaxed, st, mag});
      bound = std::min(bound, relaxed);
    }

    int r = -1;
    double step = flip;
    VarStatus leave_status = VarStatus::AtLower;
    if (bland) {
      double best_limit = flip;
      int best_var = n_ + m_;
      for (const auto& c : candidates) {
        const int var = head_[static_cast<std::size_t>(c.row)];
        if (c.limit < best_limit - 1e-12 || (c.limit <= best_limit + 1e-12 && r >= 0 && var < best_var) ||
            (c.limit <= best_limit + 1e-12 && r < 0 && c.limit < best_limit)) {
          best_limit = c.limit;
          best_var = var;
          r = c.row;
          leave_status = c.status;
        }
      }
      step = r >= 0 ? best_limit : flip;
    } else {
      double best_mag = 0.0;
      for (const auto& c : candidates) {
        if (c.limit <= bound && c.magnitude > best_mag) {
          best_mag = c.magnitude;
          r = c.row;
          leave_status = c.status;
          step = c.limit;
        }
      }
      if (r >= 0 && flip <= step) r = -1, step = flip;
    }

    if (r < 0 && !std::isfinite(step)) {
      if (phase1) return PrimalResult::Infeasible;  // cannot happen in exact arithmetic
      return PrimalResult::Unbounded;
    }

    if (step > 0.0) {
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] != 0.0) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] -= dir * step * alpha[i];
      }
      x_[qidx] += dir * step;
    }
    degenerate = step <= 1e-12 ? degenerate + 1 : 0;
    ++total_iterations_;
    fresh = false;

    if (r < 0) {
      status_[qidx] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
      x_[qidx] = nonbasic_value(q);
      continue;
    }
    const auto leaving = static_cast<std::size_t>(head_[static_cast<std::size_t>(r)]);
    x_[leaving] = leave_status == VarStatus::AtLower ? lower_[leaving] : upper_[leaving];
    pivot(r, q, alpha, leave_status);
  }
}

SimplexSolver::DualResult SimplexSolver::run_dual(double cutoff) {
  constexpr double kStablePivot = 1e-7;
  long degenerate = 0;
  Eigen::VectorXd rho(m_);
  Eigen::VectorXd tau(m_);
  Eigen::VectorXd alpha(m_);
  Eigen::VectorXd shift(m_);
  std::vector<double> row;
  const double tol = opt_.primal_tol;
  bool duals_valid = false;

  struct Candidate {
    int var;
    double ratio;
    double relaxed;
    double magnitude;
  };
  std::vector<Candidate> candidates;
  std::vector<int> flips;

  // An infeasibility proof is only trusted when it was derived from fresh
  // factors; otherwise refactor and look again.
  auto confirm_infeasible = [&] {
    if (factor_->num_etas() == 0) return true;
    factored_ = false;
    return false;
  };

  while (true) {
    if (limits_hit()) return DualResult::Limit;
    if (!factored_) {
      if (!refactor()) return DualResult::Singular;
      duals_valid = false;
    }
    if (primal_dirty_) compute_primal();
    if (!duals_valid) {
      compute_phase2_duals();
      duals_valid = true;
    }

    // Leaving row: largest infeasibility^2 / weight (lowest variable index under Bland).
    const bool bland = degenerate > opt_.bland_threshold;
    int r = -1;
    double best_score = 0.0;
    for (int i = 0; i < m_; ++i) {
      const auto b = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
      const double viol = std::max(lower_[b] - x_[b], x_[b] - upper_[b]);
      if (viol <= tol) continue;
      if (bland) {
        if (r < 0 || head_[static_cast<std::size_t>(i)] < head_[static_cast<std::size_t>(r)]) r = i;
        continue;
      }
      const double score = viol * viol / dse_weight_[static_cast<std::size_t>(i)];
      if (score > best_score) {
        best_score = score;
        r = i;
      }
    }
    if (r < 0) return DualResult::Feasible;
    if (std::isfinite(cutoff) && objective() > cutoff + 1e-9 * std::max(1.0, std::abs(cutoff))) {
      return DualResult::Cutoff;
    }

    rho.setZero(m_);
    rho[r] = 1.0;
    factor_->btran(rho);
    pivot_row(rho, row);

    const auto leaving = static_cast<std::size_t>(head_[static_cast<std::size_t>(r)]);
    const bool increase = x_[leaving] < lower_[leaving];
    const double target = increase ? lower_[leaving] : upper_[leaving];

    candidates.clear();
    for (int j = 0; j < n_ + m_; ++j) {
      const auto idx = static_cast<std::size_t>(j);
      const VarStatus st = status_[idx];
      if (st == VarStatus::Basic || lower_[idx] == upper_[idx]) continue;
      const double arj = row[idx];
      if (std::abs(arj) < opt_.pivot_tol) continue;
      bool eligible = false;
      if (st == VarStatus::Free) {
        eligible = true;
      } else if (increase) {
        eligible = (st == VarStatus::AtLower && arj < 0.0) || (st == VarStatus::AtUpper && arj > 0.0);
      } else {
        eligible = (st == VarStatus::AtLower && arj > 0.0) || (st == VarStatus::AtUpper && arj < 0.0);
      }
      if (!eligible) continue;
      const double d = dj_[j];
      double slack = 0.0;
      switch (st) {
        case VarStatus::AtLower: slack = std::max(0.0, d); break;
        case VarStatus::AtUpper: slack = std::max(0.0, -d); break;
        default: slack = std::abs(d); break;
      }
      const double mag = std::abs(arj);
      candidates.push_back({j, slack / mag, bland ? slack / mag : (slack + opt_.dual_tol) / mag, mag});
    }
    if (candidates.empty()) {
      if (confirm_infeasible()) return DualResult::Infeasible;
      continue;
    }

    // Bound-flipping ratio test: pass breakpoints of boxed columns while the
    // dual objective keeps improving, then pick the entering column among the
    // remaining near-ties by pivot magnitude.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return a.ratio < b.ratio || (a.ratio == b.ratio && a.var < b.var);
    });
    flips.clear();
    std::size_t stop = 0;
    if (!bland) {
      double slope = std::abs(x_[leaving] - target);
      for (; stop < candidates.size(); ++stop) {
        const auto idx = static_cast<std::size_t>(candidates[stop].var);
        const double range = upper_[idx] - lower_[idx];
        if (!std::isfinite(range)) break;
        // Stop once the row is feasible to tolerance; a flip that leaves only
        // rounding residue would otherwise read as an infeasibility proof.
        const double after = slope - candidates[stop].magnitude * range;
        if (after <= tol) break;
        slope = after;
      }
      if (stop == candidates.size()) {
        if (confirm_infeasible()) return DualResult::Infeasible;
        continue;
      }
    }
    std::size_t pick = stop;
    if (!bland) {
      const double limit = candidates[stop].relaxed;
      for (std::size_t t = stop + 1; t < candidates.size() && candidates[t].ratio <= limit; ++t) {
        if (candidates[t].magnitude > candidates[pick].magnitude) pick = t;
      }
    }
    // A tiny pivot would leave B numerically singular; the primal finishes
    // from here instead.
    double largest = 1.0;
    for (const auto& c : candidates) largest = std::max(largest, c.magnitude);
    if (candidates[pick].magnitude < kStablePivot * largest) {
      if (factor_->num_etas() == 0) return DualResult::Unstable;
      factored_ = false;
      continue;
    }
    for (std::size_t t = 0; t < stop; ++t) flips.push_back(candidates[t].var);
    const int q = candidates[pick].var;
    const double chosen_ratio = candidates[pick].ratio;
    degenerate = chosen_ratio <= 1e-12 ? degenerate + 1 : 0;

    column_into(q, alpha);
    factor_->ftran(alpha);
    if (std::abs(alpha[r]) < 1e-11 || std::abs(alpha[r] - row[static_cast<std::size_t>(q)]) >
                                          1e-7 * std::max(1.0, std::abs(alpha[r]))) {
      // Row and column computations disagree; rebuild factors and retry.
      factored_ = false;
      ++total_iterations_;
      continue;
    }

    // Dual update.
    const double theta = dj_[q] / row[static_cast<std::size_t>(q)];
    if (theta != 0.0) {
      for (int j = 0; j < n_ + m_; ++j) {
        const auto idx = static_cast<std::size_t>(j);
        if (status_[idx] != VarStatus::Basic && row[idx] != 0.0) dj_[j] -= theta * row[idx];
      }
    }
    dj_[q] = 0.0;
    dj_[static_cast<Eigen::Index>(leaving)] = -theta;

    // Primal update: bound flips first, then the basis change.
    if (!flips.empty()) {
      shift.setZero(m_);
      for (int j : flips) {
        const auto idx = static_cast<std::size_t>(j);
        const bool up = status_[idx] == VarStatus::AtLower;
        const double step = up ? upper_[idx] - lower_[idx] : lower_[idx] - upper_[idx];
        status_[idx] = up ? VarStatus::AtUpper : VarStatus::AtLower;
        x_[idx] = nonbasic_value(j);
        if (j < n_) {
          for (int p = lp_.col_start[idx]; p < lp_.col_start[idx + 1]; ++p) {
            shift[lp_.row_index[static_cast<std::size_t>(p)]] += lp_.value[static_cast<std::size_t>(p)] * step;
          }
        } else {
          shift[j - n_] -= step;
        }
      }
      factor_->ftran(shift);
      for (int i = 0; i < m_; ++i) {
        if (shift[i] != 0.0) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] -= shift[i];
      }
    }
    const double delta = (x_[leaving] - target) / alpha[r];
    for (int i = 0; i < m_; ++i) {
      if (alpha[i] != 0.0) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] -= alpha[i] * delta;
    }
    x_[static_cast<std::size_t>(q)] += delta;
    x_[leaving] = target;

    // Steepest-edge weights, using tau = B^{-1} rho from the old basis.
    tau = rho;
    factor_->ftran(tau);
    const double wr = rho.squaredNorm();
    const double ar = alpha[r];
    for (int i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      const double ratio = alpha[i] / ar;
      auto& w = dse_weight_[static_cast<std::size_t>(i)];
      w = std::max(w + ratio * (ratio * wr - 2.0 * tau[i]), 1e-4);
    }
    dse_weight_[static_cast<std::size_t>(r)] = std::max(wr / (ar * ar), 1e-4);

    ++total_iterations_;
    pivot(r, q, alpha, increase ? VarStatus::AtLower : VarStatus::AtUpper);
  }
}

LpStatus SimplexSolver::solve(double cutoff,
                              std::optional<std::chrono::steady_clock::time_point> deadline) {
  deadline_ = deadline;
  time_out_ = false;
  iteration_budget_ = total_iterations_ + opt_.max_iterations;

  for (int attempt = 0; attempt < 3; ++attempt) {
    if (!factored_ && !refactor()) {
      reset_basis();
      if (!refactor()) break;
    }
    compute_primal();

    bool infeasible = false;
    for (int i = 0; i < m_ && !infeasible; ++i) {
      const auto b = static_cast<std::size_t>(head_[static_cast<std::size_t>(i)]);
      infeasible = x_[b] < lower_[b] - opt_.primal_tol || x_[b] > upper_[b] + opt_.primal_tol;
    }
    if (infeasible) {
      std::vector<double> cb(static_cast<std::size_t>(m_));
      for (int i = 0; i < m_; ++i) {
        cb[static_cast<std::size_t>(i)] = cost_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])];
      }
      compute_duals(cb);
      if (dual_feasible()) {
        const DualResult dr = run_dual(cutoff);
        if (dr == DualResult::Cutoff) return LpStatus::Cutoff;
        if (dr == DualResult::Limit) return time_out_ ? LpStatus::TimeLimit : LpStatus::IterationLimit;
        if (dr == DualResult::Infeasible) return LpStatus::Infeasible;
        if (dr == DualResult::Singular) {
          reset_basis();
          continue;
        }
        // Primal cleans up any dual infeasibility left by the Harris tolerances.
      }
    }

    switch (run_primal()) {
      case PrimalResult::Optimal: return LpStatus::Optimal;
      case PrimalResult::Infeasible: return LpStatus::Infeasible;
      case PrimalResult::Unbounded: return LpStatus::Unbounded;
      case PrimalResult::Limit: return time_out_ ? LpStatus::TimeLimit : LpStatus::IterationLimit;
      case PrimalResult::Singular: reset_basis(); continue;
    }
  }
  throw SolverError(SolverErrorKind::NumericalBreakdown,
                    "simplex basis became singular repeatedly (pivots below tolerance)");
}

double SimplexSolver::objective() const {
  double v = lp_.cost_offset;
  for (int j = 0; j < n_; ++j) v += cost_[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
  return v;
}

std::vector<double> SimplexSolver::primal() const {
  return std::vector<double>(x_.begin(), x_.begin() + n_);
}

}  // namespace deafs::milp
