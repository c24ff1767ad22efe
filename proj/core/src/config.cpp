#include "deafs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "deafs/errors.hpp"

namespace deafs {

const char* to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Average: return "average";
    case ObjectiveKind::Weighted: return "weighted";
    case ObjectiveKind::Quadratic: return "quadratic";
    case ObjectiveKind::Min: return "min";
    case ObjectiveKind::Percentile: return "percentile";
  }
  return "unknown";
}

ObjectiveKind parse_objective(const std::string& name) {
  for (auto kind : {ObjectiveKind::Average, ObjectiveKind::Weighted, ObjectiveKind::Quadratic,
                    ObjectiveKind::Min, ObjectiveKind::Percentile}) {
    if (name == to_string(kind)) return kind;
  }
  throw ConfigError(ConfigErrorKind::BadValue,
                    "unknown objective '" + name + "' (average|weighted|quadratic|min|percentile)");
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || std::isnan(v)) {
    throw ConfigError(ConfigErrorKind::BadValue, key + ": '" + text + "' is not a number");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(ConfigErrorKind::BadValue, key + ": '" + text + "' is not an integer");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError(ConfigErrorKind::BadValue, key + ": '" + text + "' is not a boolean");
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(to_double(key, part));
  return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) out.push_back(to_int(key, part));
  return out;
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

}  // namespace

SelectionConfig parse_config(std::istream& in) {
  SelectionConfig cfg;
  std::map<int, Cluster> clusters;
  std::optional<std::vector<double>> costs;
  std::optional<double> budget;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(ConfigErrorKind::Syntax,
                        "line " + std::to_string(line_no) + ": expected key=value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "p") {
      cfg.p = to_int(key, value);
    } else if (key == "p_tilde") {
      cfg.p_tilde = to_int(key, value);
    } else if (key == "objective") {
      cfg.objective = parse_objective(value);
    } else if (key == "pi") {
      cfg.pi = to_int(key, value);
      if (cfg.pi < 1 || cfg.pi > 100) {
        throw ConfigError(ConfigErrorKind::BadPercentile, "pi must be in 1..100, got " + value);
      }
    } else if (key == "weights") {
      cfg.weights = to_doubles(key, value);
      for (double w : cfg.weights) {
        if (w < 0.0 || !std::isfinite(w)) {
          throw ConfigError(ConfigErrorKind::BadWeights, "weights must be finite and nonnegative");
        }
      }
    } else if (key.rfind("bounds.", 0) == 0) {
      const int o = to_int(key, key.substr(7));
      const auto lu = to_doubles(key, value);
      if (lu.size() != 2) throw ConfigError(ConfigErrorKind::BadValue, key + ": expected L,U");
      cfg.weight_bounds[o - 1] = WeightBound{lu[0], lu[1]};
    } else if (key == "cost.c") {
      costs = to_doubles(key, value);
    } else if (key == "cost.C") {
      budget = to_double(key, value);
    } else if (key.rfind("cluster.", 0) == 0) {
      const int id = to_int(key, key.substr(8));
      const auto colon = value.find(':');
      if (colon == std::string::npos) {
        throw ConfigError(ConfigErrorKind::Syntax, key + ": expected o1,o2,...:pmin,pmax");
      }
      Cluster c;
      for (int o : to_ints(key, value.substr(0, colon))) c.outputs.push_back(o - 1);
      const auto range = to_ints(key, value.substr(colon + 1));
      if (range.size() != 2) throw ConfigError(ConfigErrorKind::Syntax, key + ": expected pmin,pmax");
      c.p_min = range[0];
      c.p_max = range[1];
      clusters[id] = std::move(c);
    } else if (key == "corr.tau") {
      if (!cfg.correlation) cfg.correlation.emplace();
      cfg.correlation->tau = to_double(key, value);
    } else if (key == "corr.pairs") {
      if (!cfg.correlation) cfg.correlation.emplace();
      for (const auto& pair : split(value, ',')) {
        const auto ab = split(pair, ':');
        if (ab.size() != 2) throw ConfigError(ConfigErrorKind::Syntax, key + ": expected a:b pairs");
        int a = to_int(key, ab[0]) - 1;
        int b = to_int(key, ab[1]) - 1;
        if (a > b) std::swap(a, b);
        cfg.correlation->pairs.emplace_back(a, b);
      }
    } else if (key == "bigm") {
      cfg.big_m = to_double(key, value);
    } else if (key == "time_limit") {
      cfg.time_limit = to_double(key, value);
    } else if (key == "gap") {
      cfg.gap_tol = to_double(key, value);
    } else if (key == "tighten") {
      cfg.tighten = to_bool(key, value);
    } else if (key == "lex_ties") {
      cfg.lex_ties = to_bool(key, value);
    } else if (key == "warm_start") {
      cfg.warm_start = to_bool(key, value);
    } else {
      throw ConfigError(ConfigErrorKind::Syntax,
                        "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (costs.has_value() != budget.has_value()) {
    throw ConfigError(ConfigErrorKind::BadValue, "cost.c and cost.C must be given together");
  }
  if (costs) cfg.cost = CostBudget{*costs, *budget};
  for (auto& [id, c] : clusters) cfg.clusters.push_back(std::move(c));
  return cfg;
}

SelectionConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigErrorKind::Syntax, "cannot read config " + path.string());
  return parse_config(in);
}

std::string format_config(const SelectionConfig& cfg) {
  const SelectionConfig def;
  std::ostringstream out;
  auto join = [](const auto& values, auto&& fmt) {
    std::string s;
    for (const auto& v : values) s += (s.empty() ? "" : ",") + fmt(v);
    return s;
  };
  out << "p=" << cfg.p << '\n';
  if (cfg.p_tilde) out << "p_tilde=" << *cfg.p_tilde << '\n';
  out << "objective=" << to_string(cfg.objective) << '\n';
  if (cfg.objective == ObjectiveKind::Percentile) out << "pi=" << cfg.pi << '\n';
  if (!cfg.weights.empty()) out << "weights=" << join(cfg.weights, number) << '\n';
  for (const auto& [o, b] : cfg.weight_bounds) {
    out << "bounds." << o + 1 << '=' << number(b.lower) << ',' << number(b.upper) << '\n';
  }
  if (cfg.cost) {
    out << "cost.c=" << join(cfg.cost->cost, number) << '\n';
    out << "cost.C=" << number(cfg.cost->budget) << '\n';
  }
  for (std::size_t l = 0; l < cfg.clusters.size(); ++l) {
    const auto& c = cfg.clusters[l];
    out << "cluster." << l + 1 << '=' << join(c.outputs, [](int o) { return std::to_string(o + 1); })
        << ':' << c.p_min << ',' << c.p_max << '\n';
  }
  if (cfg.correlation) {
    if (cfg.correlation->tau) out << "corr.tau=" << number(*cfg.correlation->tau) << '\n';
    if (!cfg.correlation->pairs.empty()) {
      out << "corr.pairs="
          << join(cfg.correlation->pairs,
                  [](const auto& p) { return std::to_string(p.first + 1) + ':' + std::to_string(p.second + 1); })
          << '\n';
    }
  }
  out << "bigm=" << number(cfg.big_m) << '\n';
  out << "time_limit=" << number(cfg.time_limit) << '\n';
  out << "gap=" << number(cfg.gap_tol) << '\n';
  if (cfg.tighten != def.tighten) out << "tighten=" << (cfg.tighten ? "true" : "false") << '\n';
  if (cfg.lex_ties != def.lex_ties) out << "lex_ties=" << (cfg.lex_ties ? "true" : "false") << '\n';
  if (cfg.warm_start != def.warm_start) out << "warm_start=" << (cfg.warm_start ? "true" : "false") << '\n';
  return out.str();
}

int percentile_count(int num_dmus, int pi) { return num_dmus * pi / 100; }

void validate_config(const SelectionConfig& cfg, const Dataset& d) {
  const int K = d.num_dmus();
  const int O = d.num_outputs();
  const int I = d.num_inputs();
  auto bad = [](const std::string& msg) { throw ConfigError(ConfigErrorKind::BadValue, msg); };

  if (cfg.p < 1 || cfg.p > O) bad("p must be in 1.." + std::to_string(O) + ", got " + std::to_string(cfg.p));
  if (cfg.p_tilde && (*cfg.p_tilde < 1 || *cfg.p_tilde > I)) {
    bad("p_tilde must be in 1.." + std::to_string(I) + ", got " + std::to_string(*cfg.p_tilde));
  }
  if (!(cfg.big_m > 0.0)) bad("bigm must be positive");
  if (!(cfg.time_limit >= 0.0)) bad("time_limit must be nonnegative");
  if (!(cfg.gap_tol >= 0.0)) bad("gap must be nonnegative");
  if (cfg.objective == ObjectiveKind::Weighted) {
    if (static_cast<int>(cfg.weights.size()) != K) {
      throw ConfigError(ConfigErrorKind::BadWeights, "weights needs " + std::to_string(K) +
                                                         " values, got " + std::to_string(cfg.weights.size()));
    }
    for (double w : cfg.weights) {
      if (w < 0.0 || !std::isfinite(w)) {
        throw ConfigError(ConfigErrorKind::BadWeights, "weights must be finite and nonnegative");
      }
    }
  }
  if (cfg.objective == ObjectiveKind::Percentile) {
    if (cfg.pi < 1 || cfg.pi > 100) {
      throw ConfigError(ConfigErrorKind::BadPercentile, "pi must be in 1..100");
    }
    if (percentile_count(K, cfg.pi) < 1) {
      throw ConfigError(ConfigErrorKind::BadPercentile,
                        "floor(K*pi/100) = floor(" + std::to_string(K) + "*" + std::to_string(cfg.pi) +
                            "/100) = 0; no DMU would be counted");
    }
  }
  int positive_lower = 0;
  for (const auto& [o, b] : cfg.weight_bounds) {
    if (o < 0 || o >= O) bad("bounds." + std::to_string(o + 1) + ": no such output");
    if (b.lower < 0.0 || !std::isfinite(b.lower) || b.upper < b.lower) {
      bad("bounds." + std::to_string(o + 1) + ": need 0 <= L <= U");
    }
    if (b.lower > 0.0) ++positive_lower;
  }
  if (cfg.cost) {
    if (static_cast<int>(cfg.cost->cost.size()) != O) {
      bad("cost.c needs " + std::to_string(O) + " values, got " + std::to_string(cfg.cost->cost.size()));
    }
    for (double c : cfg.cost->cost) {
      if (c < 0.0 || !std::isfinite(c)) bad("cost.c entries must be finite and nonnegative");
    }
  }
  if (!cfg.clusters.empty()) {
    std::vector<int> owner(static_cast<std::size_t>(O), -1);
    for (std::size_t l = 0; l < cfg.clusters.size(); ++l) {
      const auto& c = cfg.clusters[l];
      const std::string name = "cluster." + std::to_string(l + 1);
      if (c.outputs.empty()) bad(name + " is empty");
      for (int o : c.outputs) {
        if (o < 0 || o >= O) bad(name + ": no output " + std::to_string(o + 1));
        if (owner[static_cast<std::size_t>(o)] >= 0) {
          bad("clusters must be disjoint: output " + std::to_string(o + 1) + " appears twice");
        }
        owner[static_cast<std::size_t>(o)] = static_cast<int>(l);
      }
      if (c.p_min < 0 || c.p_max < c.p_min) bad(name + ": need 0 <= pmin <= pmax");
    }
    for (int o = 0; o < O; ++o) {
      if (owner[static_cast<std::size_t>(o)] < 0) {
        bad("clusters must cover every output: output " + std::to_string(o + 1) + " is in none");
      }
    }
  }
  if (cfg.correlation) {
    if (!cfg.correlation->tau && cfg.correlation->pairs.empty()) bad("corr needs tau or pairs");
    if (cfg.correlation->tau && std::isnan(*cfg.correlation->tau)) bad("corr.tau is not a number");
    for (const auto& [a, b] : cfg.correlation->pairs) {
      if (a < 0 || b >= O || a == b) bad("corr.pairs: invalid pair");
    }
  }

  // Arithmetic that rules out every selection.
  const std::string p_text = "p = " + std::to_string(cfg.p);
  if (positive_lower > cfg.p) {
    throw InfeasibleError("#(L_o>0) = " + std::to_string(positive_lower) + " > " + p_text +
                          ": outputs with a positive weight lower bound must all be selected");
  }
  if (!cfg.clusters.empty()) {
    int sum_min = 0;
    int sum_max = 0;
    for (const auto& c : cfg.clusters) {
      if (c.p_min > static_cast<int>(c.outputs.size())) {
        throw InfeasibleError("cluster with " + std::to_string(c.outputs.size()) + " outputs has pmin = " +
                              std::to_string(c.p_min));
      }
      sum_min += c.p_min;
      sum_max += std::min<int>(c.p_max, static_cast<int>(c.outputs.size()));
    }
    if (sum_min > cfg.p) {
      throw InfeasibleError("sum of cluster pmin = " + std::to_string(sum_min) + " > " + p_text);
    }
    if (sum_max < cfg.p) {
      throw InfeasibleError("sum of cluster pmax = " + std::to_string(sum_max) + " < " + p_text);
    }
  }
  if (cfg.cost) {
    std::vector<double> rest;
    double forced = 0.0;
    int forced_count = 0;
    for (int o = 0; o < O; ++o) {
      const auto it = cfg.weight_bounds.find(o);
      if (it != cfg.weight_bounds.end() && it->second.lower > 0.0) {
        forced += cfg.cost->cost[static_cast<std::size_t>(o)];
        ++forced_count;
      } else {
        rest.push_back(cfg.cost->cost[static_cast<std::size_t>(o)]);
      }
    }
    std::sort(rest.begin(), rest.end());
    double cheapest = forced;
    for (int t = 0; t < cfg.p - forced_count; ++t) cheapest += rest[static_cast<std::size_t>(t)];
    if (cheapest > cfg.cost->budget + 1e-9 * std::max(1.0, std::abs(cfg.cost->budget))) {
      throw InfeasibleError("cheapest selection of " + std::to_string(cfg.p) + " outputs costs " +
                            number(cheapest) + " > C = " + number(cfg.cost->budget));
    }
  }
}

std::vector<std::pair<int, int>> conflict_pairs(const SelectionConfig& cfg, const Dataset& d) {
  std::set<std::pair<int, int>> pairs;
  if (!cfg.correlation) return {};
  for (const auto& p : cfg.correlation->pairs) pairs.insert(p);
  if (cfg.correlation->tau && d.num_dmus() >= 2) {
    const Eigen::MatrixXi r = threshold_rule_matrix(correlation_matrix(d), *cfg.correlation->tau);
    for (int a = 0; a < d.num_outputs(); ++a) {
      for (int b = a + 1; b < d.num_outputs(); ++b) {
        if (r(a, b) != 0) pairs.emplace(a, b);
      }
    }
  }
  return {pairs.begin(), pairs.end()};
}

bool admissible_outputs(const SelectionConfig& cfg, const std::vector<int>& outputs,
                        const std::vector<std::pair<int, int>>& conflicts) {
  if (static_cast<int>(outputs.size()) != cfg.p) return false;
  std::set<int> chosen(outputs.begin(), outputs.end());
  for (const auto& [o, b] : cfg.weight_bounds) {
    if (b.lower > 0.0 && !chosen.count(o)) return false;
  }
  if (cfg.cost) {
    long double total = 0.0;
    for (int o : outputs) total += cfg.cost->cost[static_cast<std::size_t>(o)];
    if (static_cast<double>(total) > cfg.cost->budget + 1e-9 * std::max(1.0, std::abs(cfg.cost->budget))) {
      return false;
    }
  }
  for (const auto& c : cfg.clusters) {
    int n = 0;
    for (int o : c.outputs) n += static_cast<int>(chosen.count(o));
    if (n < c.p_min || n > c.p_max) return false;
  }
  for (const auto& [a, b] : conflicts) {
    if (chosen.count(a) && chosen.count(b)) return false;
  }
  return true;
}

}  // namespace deafs
