#include "deafs/formulation.hpp"

#include <algorithm>
#include <string>

#include "deafs/errors.hpp"

namespace deafs {

using milp::LinearTerm;
using milp::Relation;

std::vector<double> tightened_output_bounds(const Dataset& d, int k) {
  std::vector<double> ub(static_cast<std::size_t>(d.num_outputs()));
  for (int o = 0; o < d.num_outputs(); ++o) {
    const double y = d.output(k, o);
    ub[static_cast<std::size_t>(o)] = y > 0.0 ? 1.0 / y : 0.0;
  }
  return ub;
}

std::vector<double> frontier_output_bounds(const Dataset& d, int k) {
  std::vector<double> ub = tightened_output_bounds(d, k);
  for (int i = 0; i < d.num_inputs(); ++i) {
    if (!(d.input(k, i) > 0.0)) return ub;
  }
  // sum_i alpha_i x_i^(k) = 1 makes sum_i alpha_i x_i^(j) a convex
  // combination of x_i^(j) / x_i^(k), so row j caps beta_o by that over y_o^(j).
  for (int o = 0; o < d.num_outputs(); ++o) {
    auto& b = ub[static_cast<std::size_t>(o)];
    if (b == 0.0) continue;
    for (int j = 0; j < d.num_dmus(); ++j) {
      const double y = d.output(j, o);
      if (!(y > 0.0)) continue;
      double reach = 0.0;
      for (int i = 0; i < d.num_inputs(); ++i) reach = std::max(reach, d.input(j, i) / d.input(k, i));
      b = std::min(b, reach / y);
    }
  }
  return ub;
}

std::vector<bool> forced_zero_outputs(const Dataset& d, int k, int p) {
  int positive = 0;
  for (int o = 0; o < d.num_outputs(); ++o) positive += d.output(k, o) > 0.0 ? 1 : 0;
  std::vector<bool> forced(static_cast<std::size_t>(d.num_outputs()), false);
  if (positive < p) return forced;
  for (int o = 0; o < d.num_outputs(); ++o) forced[static_cast<std::size_t>(o)] = d.output(k, o) == 0.0;
  return forced;
}

namespace {

std::string idx(int v) { return std::to_string(v + 1); }

SelectionModel build_blocks(const Dataset& d, const std::vector<int>& dmus, const SelectionConfig& cfg,
                            bool joint, bool select_inputs) {
  validate_config(cfg, d);
  if (select_inputs && !cfg.p_tilde) {
    throw ConfigError(ConfigErrorKind::BadValue, "input selection needs p_tilde");
  }
  const int O = d.num_outputs();
  const int I = d.num_inputs();
  SelectionModel sm;
  sm.joint = joint;
  sm.dmus = dmus;
  auto& m = sm.model;
  m.set_sense(milp::Sense::Maximize);

  for (int o = 0; o < O; ++o) sm.z.push_back(m.add_binary("z_" + idx(o)));
  if (select_inputs) {
    for (int i = 0; i < I; ++i) sm.z_in.push_back(m.add_binary("zin_" + idx(i)));
  }

  for (std::size_t b = 0; b < dmus.size(); ++b) {
    const int k = dmus[b];
    const std::string tag = joint ? "_" + idx(k) : "";
    std::vector<int> alpha;
    std::vector<int> beta;
    for (int i = 0; i < I; ++i) {
      const double x = d.input(k, i);
      double ub = milp::kInfinity;
      if (select_inputs) ub = cfg.tighten && x > 0.0 ? 1.0 / x : cfg.big_m;
      alpha.push_back(m.add_continuous("alpha" + tag + "_" + idx(i), 0.0, ub));
      if (select_inputs) {
        m.add_constraint("link_in" + tag + "_" + idx(i),
                         {{alpha.back(), 1.0}, {sm.z_in[static_cast<std::size_t>(i)], -ub}},
                         Relation::LessEqual, 0.0);
      }
    }
    std::vector<LinearTerm> eff;
    const std::vector<double> frontier = frontier_output_bounds(d, k);
    for (int o = 0; o < O; ++o) {
      const double y = d.output(k, o);
      WeightBound wb;
      const auto it = cfg.weight_bounds.find(o);
      if (it != cfg.weight_bounds.end()) wb = it->second;
      double ub = cfg.big_m;
      if (cfg.tighten) ub = y > 0.0 ? frontier[static_cast<std::size_t>(o)] : (wb.lower > 0.0 ? cfg.big_m : 0.0);
      ub = std::min(ub, wb.upper);
      const int v = m.add_continuous("beta" + tag + "_" + idx(o), 0.0, ub);
      beta.push_back(v);
      if (y > 0.0) eff.push_back({v, y});
      if (ub == 0.0 && wb.lower == 0.0) continue;
      const int z = sm.z[static_cast<std::size_t>(o)];
      m.add_constraint("link" + tag + "_" + idx(o), {{v, 1.0}, {z, -ub}}, Relation::LessEqual, 0.0);
      if (wb.lower > 0.0) {
        m.add_constraint("link_lo" + tag + "_" + idx(o), {{v, 1.0}, {z, -wb.lower}}, Relation::GreaterEqual,
                         0.0);
      }
    }
    for (int j = 0; j < d.num_dmus(); ++j) {
      std::vector<LinearTerm> row;
      for (int o = 0; o < O; ++o) {
        const double y = d.output(j, o);
        if (y != 0.0) row.push_back({beta[static_cast<std::size_t>(o)], y});
      }
      for (int i = 0; i < I; ++i) {
        const double x = d.input(j, i);
        if (x != 0.0) row.push_back({alpha[static_cast<std::size_t>(i)], -x});
      }
      m.add_constraint("frontier" + tag + "_" + idx(j), std::move(row), Relation::LessEqual, 0.0);
    }
    std::vector<LinearTerm> norm;
    for (int i = 0; i < I; ++i) {
      const double x = d.input(k, i);
      if (x != 0.0) norm.push_back({alpha[static_cast<std::size_t>(i)], x});
    }
    m.add_constraint("normalization" + tag, std::move(norm), Relation::Equal, 1.0);
    sm.alpha.push_back(std::move(alpha));
    sm.beta.push_back(std::move(beta));
    sm.efficiency_terms.push_back(std::move(eff));
  }

  std::vector<LinearTerm> card;
  for (int z : sm.z) card.push_back({z, 1.0});
  m.add_constraint("cardinality", std::move(card), Relation::Equal, cfg.p);
  if (select_inputs) {
    std::vector<LinearTerm> card_in;
    for (int z : sm.z_in) card_in.push_back({z, 1.0});
    m.add_constraint("cardinality_in", std::move(card_in), Relation::Equal, *cfg.p_tilde);
  }
  for (const auto& [o, wb] : cfg.weight_bounds) {
    if (wb.lower > 0.0) m.set_bounds(sm.z[static_cast<std::size_t>(o)], 1.0, 1.0);
  }
  // Swapping a zero output for a positive one never lowers E^(k), but the
  // swap may break a cost, cluster or conflict rule.
  const bool swaps_free = !cfg.cost && cfg.clusters.empty() && !cfg.correlation;
  if (!joint && cfg.tighten && swaps_free) {
    const auto forced = forced_zero_outputs(d, dmus.front(), cfg.p);
    for (int o = 0; o < O; ++o) {
      const auto it = cfg.weight_bounds.find(o);
      const bool lower = it != cfg.weight_bounds.end() && it->second.lower > 0.0;
      if (forced[static_cast<std::size_t>(o)] && !lower) m.set_bounds(sm.z[static_cast<std::size_t>(o)], 0.0, 0.0);
    }
  }
  return sm;
}

SelectionModel build_individual(const Dataset& d, int k, const SelectionConfig& cfg, bool inputs) {
  if (k < 0 || k >= d.num_dmus()) {
    throw ConfigError(ConfigErrorKind::BadValue, "DMU index " + std::to_string(k + 1) + " out of range");
  }
  SelectionModel sm = build_blocks(d, {k}, cfg, false, inputs);
  attach_objective(sm, d, cfg);
  apply_extensions(sm, d, cfg);
  return sm;
}

}  // namespace

SelectionModel build_osdea_individual(const Dataset& d, int k, const SelectionConfig& cfg) {
  return build_individual(d, k, cfg, cfg.p_tilde.has_value());
}

SelectionModel build_fsdea_individual(const Dataset& d, int k, const SelectionConfig& cfg) {
  return build_individual(d, k, cfg, true);
}

SelectionModel build_osdea_joint(const Dataset& d, const SelectionConfig& cfg) {
  std::vector<int> dmus(static_cast<std::size_t>(d.num_dmus()));
  for (int k = 0; k < d.num_dmus(); ++k) dmus[static_cast<std::size_t>(k)] = k;
  SelectionModel sm = build_blocks(d, dmus, cfg, true, cfg.p_tilde.has_value());
  attach_objective(sm, d, cfg);
  apply_extensions(sm, d, cfg);
  return sm;
}

void attach_objective(SelectionModel& sm, const Dataset& d, const SelectionConfig& cfg) {
  auto& m = sm.model;
  const auto blocks = sm.efficiency_terms.size();
  const double K = static_cast<double>(blocks);
  auto add_scaled = [&](const std::vector<LinearTerm>& terms, double scale) {
    for (const auto& t : terms) m.set_objective(t.var, m.objective()[static_cast<std::size_t>(t.var)] + scale * t.coef);
  };

  if (!sm.joint) {
    m.set_sense(milp::Sense::Maximize);
    for (const auto& terms : sm.efficiency_terms) add_scaled(terms, 1.0);
    return;
  }
  switch (cfg.objective) {
    case ObjectiveKind::Average:
      m.set_sense(milp::Sense::Maximize);
      for (const auto& terms : sm.efficiency_terms) add_scaled(terms, 1.0 / K);
      break;
    case ObjectiveKind::Weighted:
      if (cfg.weights.size() != static_cast<std::size_t>(d.num_dmus())) {
        throw ConfigError(ConfigErrorKind::BadWeights, "weights needs one value per DMU");
      }
      m.set_sense(milp::Sense::Maximize);
      for (std::size_t b = 0; b < blocks; ++b) {
        add_scaled(sm.efficiency_terms[b], cfg.weights[static_cast<std::size_t>(sm.dmus[b])] / K);
      }
      break;
    case ObjectiveKind::Quadratic:
      m.set_sense(milp::Sense::Minimize);
      for (std::size_t b = 0; b < blocks; ++b) {
        milp::QuadraticTerm q;
        q.name = "loss_" + idx(sm.dmus[b]);
        q.target = 1.0;
        q.terms = sm.efficiency_terms[b];
        q.weight = 1.0 / K;
        m.add_quadratic_term(std::move(q));
      }
      break;
    case ObjectiveKind::Min:
      m.set_sense(milp::Sense::Maximize);
      sm.lambda = m.add_continuous("lambda", 0.0, 1.0, 1.0);
      for (std::size_t b = 0; b < blocks; ++b) {
        std::vector<LinearTerm> row{{sm.lambda, 1.0}};
        for (const auto& t : sm.efficiency_terms[b]) row.push_back({t.var, -t.coef});
        m.add_constraint("min_" + idx(sm.dmus[b]), std::move(row), Relation::LessEqual, 0.0);
      }
      break;
    case ObjectiveKind::Percentile: {
      const int count = percentile_count(d.num_dmus(), cfg.pi);
      if (count < 1) throw ConfigError(ConfigErrorKind::BadPercentile, "floor(K*pi/100) = 0");
      m.set_sense(milp::Sense::Maximize);
      sm.lambda = m.add_continuous("lambda", 0.0, 1.0, 1.0);
      std::vector<LinearTerm> card;
      for (std::size_t b = 0; b < blocks; ++b) {
        const int delta = m.add_binary("delta_" + idx(sm.dmus[b]));
        sm.delta.push_back(delta);
        card.push_back({delta, 1.0});
        // e_k >= lambda - (1 - delta_k)
        std::vector<LinearTerm> row{{sm.lambda, -1.0}, {delta, -1.0}};
        row.insert(row.end(), sm.efficiency_terms[b].begin(), sm.efficiency_terms[b].end());
        m.add_constraint("percentile_" + idx(sm.dmus[b]), std::move(row), Relation::GreaterEqual, -1.0);
      }
      m.add_constraint("percentile_count", std::move(card), Relation::Equal, count);
      break;
    }
  }
}

void apply_extensions(SelectionModel& sm, const Dataset& d, const SelectionConfig& cfg) {
  auto& m = sm.model;
  if (cfg.cost) {
    std::vector<LinearTerm> row;
    for (std::size_t o = 0; o < sm.z.size(); ++o) {
      if (cfg.cost->cost[o] != 0.0) row.push_back({sm.z[o], cfg.cost->cost[o]});
    }
    m.add_constraint("cost", std::move(row), Relation::LessEqual, cfg.cost->budget);
  }
  for (std::size_t l = 0; l < cfg.clusters.size(); ++l) {
    const auto& c = cfg.clusters[l];
    std::vector<LinearTerm> row;
    for (int o : c.outputs) row.push_back({sm.z[static_cast<std::size_t>(o)], 1.0});
    if (c.p_min > 0) m.add_constraint("cluster_min_" + idx(static_cast<int>(l)), row, Relation::GreaterEqual, c.p_min);
    if (c.p_max < static_cast<int>(c.outputs.size())) {
      m.add_constraint("cluster_max_" + idx(static_cast<int>(l)), row, Relation::LessEqual, c.p_max);
    }
  }
  for (const auto& [a, b] : conflict_pairs(cfg, d)) {
    m.add_constraint("conflict_" + idx(a) + "_" + idx(b),
                     {{sm.z[static_cast<std::size_t>(a)], 1.0}, {sm.z[static_cast<std::size_t>(b)], 1.0}},
                     Relation::LessEqual, 1.0);
  }
}

}  // namespace deafs
