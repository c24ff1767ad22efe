#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "deafs/config.hpp"
#include "deafs/dataset.hpp"
#include "deafs/efficiency.hpp"
#include "deafs/errors.hpp"
#include "deafs/game.hpp"
#include "deafs/greedy.hpp"
#include "deafs/oracle.hpp"
#include "deafs/selection.hpp"
#include "report.hpp"

#ifndef DEAFS_VERSION
#define DEAFS_VERSION "unknown"
#endif

namespace deafs::cli {

namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  std::string data;
  std::string config;
  std::string out;
  std::optional<unsigned long> seed;
  bool oracle = false;
  bool no_normalize = false;
  bool no_timestamp = false;
};

struct Flags {
  GlobalFlags global;
  std::string outputs;  // eff
  std::string mode = "joint";
  int dmu = 0;          // 1-based, individual mode
  int p_min = 1;
  std::optional<int> p_max;
};

/// Thrown after the report is complete when the run must still fail.
struct Failure {
  int code;
  std::string message;
};

class Run {
 public:
  Run(const std::vector<std::string>& args, const Flags& flags) : flags_(flags) {
    report_["tool"] = "deafs";
    report_["version"] = DEAFS_VERSION;
    report_["command"] = args;
    if (!flags.global.no_timestamp) {
      const std::time_t now = std::time(nullptr);
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      report_["timestamp"] = buf;
    }
    if (flags.global.seed) report_["seed"] = *flags.global.seed;
  }

  Json& report() { return report_; }
  Artifacts& artifacts() { return artifacts_; }
  bool timing() const { return !flags_.global.no_timestamp; }
  void warn(const std::string& w) { warnings_.push_back(w); }

  Dataset load() {
    Dataset raw = load_dataset(flags_.global.data);
    report_["dataset"] = dataset_digest(raw);
    if (flags_.global.no_normalize) {
      report_["normalized"] = false;
      return raw;
    }
    std::vector<std::string> constant;
    Dataset d = normalize_outputs(raw, &constant);
    for (const auto& name : constant) warn("output '" + name + "': zero range, left unnormalized");
    report_["normalized"] = true;
    return d;
  }

  SelectionConfig config() const {
    if (flags_.global.config.empty()) return SelectionConfig{};
    return load_config(flags_.global.config);
  }

  void add_config(const SelectionConfig& cfg) { report_["config"] = format_config(cfg); }

  /// Writes the artifacts and the report; returns the text for stdout.
  std::string finish() {
    report_["warnings"] = warnings_;
    if (flags_.global.out.empty()) return report_.dump(2) + "\n";
    const fs::path dir(flags_.global.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError(DataErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    Json files = Json::array();
    for (const auto& [name, _] : artifacts_) files.push_back(name);
    report_["artifacts"] = files;
    artifacts_.emplace_back("report.json", report_.dump(2) + "\n");
    std::string listing;
    for (const auto& [name, content] : artifacts_) {
      const fs::path path = dir / name;
      std::ofstream f(path, std::ios::binary);
      f << content;
      if (!f) throw DataError(DataErrorKind::Io, "cannot write " + path.string());
      listing += path.string() + "\n";
    }
    return listing;
  }

 private:
  const Flags& flags_;
  Json report_ = Json::object();
  Artifacts artifacts_;
  std::vector<std::string> warnings_;
};

std::vector<int> parse_index_list(const std::string& text, int count, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(ConfigErrorKind::BadValue, flag + ": '" + item + "' is not an index");
    }
    if (v < 1 || v > count) {
      throw ConfigError(ConfigErrorKind::BadValue, flag + ": " + std::to_string(v) + " is outside 1.." +
                                                       std::to_string(count));
    }
    out.push_back(v - 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw ConfigError(ConfigErrorKind::BadValue, flag + " is empty");
  return out;
}

SelectionTarget target_from(const Flags& f, const Dataset& d) {
  if (f.mode == "joint") return SelectionTarget::joint();
  if (f.dmu < 1 || f.dmu > d.num_dmus()) {
    throw ConfigError(ConfigErrorKind::BadValue,
                      "--dmu must be in 1.." + std::to_string(d.num_dmus()) + " in individual mode");
  }
  return SelectionTarget::individual(f.dmu - 1);
}

Json target_json(const Dataset& d, SelectionTarget t) {
  Json j;
  j["mode"] = t.mode == SelectionMode::Joint ? "joint" : "individual";
  if (t.mode == SelectionMode::Individual) {
    j["dmu"] = t.dmu + 1;
    j["dmu_id"] = d.dmu_ids()[static_cast<std::size_t>(t.dmu)];
  }
  return j;
}

bool uses_greedy(const SelectionConfig& cfg, SelectionTarget t) {
  return t.mode == SelectionMode::Joint && cfg.warm_start && !cfg.p_tilde && cfg.weight_bounds.empty() &&
         (cfg.objective == ObjectiveKind::Average || cfg.objective == ObjectiveKind::Weighted);
}

/// Compares against enumeration when it fits the cap; returns false on a
/// mismatch above 1e-6.
bool oracle_check(Run& run, Json& into, const Dataset& d, const SelectionConfig& cfg, SelectionTarget t,
                  const SelectionSolution& s) {
  if (enumeration_size(d, cfg) > static_cast<double>(kDefaultEnumerationCap)) {
    into["oracle"] = {{"checked", false}, {"reason", "enumeration exceeds the subset cap"}};
    run.warn("oracle skipped: enumeration exceeds the subset cap");
    return true;
  }
  const SelectionSolution ref = enumerate_best(d, cfg, t);
  const double diff = std::abs(ref.objective_value - s.objective_value);
  const bool ok = diff <= 1e-6;
  Json o;
  o["checked"] = true;
  o["objective_value"] = ref.objective_value;
  Json sel = Json::array();
  for (int x : ref.selected_outputs) sel.push_back(x + 1);
  o["selected_outputs"] = sel;
  o["difference"] = diff;
  o["match"] = ok;
  into["oracle"] = o;
  return ok;
}

void cmd_eff(Run& run, const Flags& f) {
  const Dataset d = run.load();
  ActiveSet a = ActiveSet::all(d);
  if (!f.outputs.empty()) a = ActiveSet::with_outputs(d, parse_index_list(f.outputs, d.num_outputs(), "--outputs"));
  Json sel = Json::array();
  for (int o : a.outputs) sel.push_back(o + 1);
  run.report()["outputs"] = sel;
  const std::vector<double> e = all_efficiencies(d, a);
  run.report()["dmu_ids"] = d.dmu_ids();
  run.report()["efficiencies"] = e;
  run.report()["summary"] = summary_json(summarize(e));
  run.artifacts().emplace_back("efficiencies.csv", efficiencies_csv(d, e));
}

void cmd_select(Run& run, const Flags& f) {
  const Dataset d = run.load();
  const SelectionConfig cfg = run.config();
  run.add_config(cfg);
  const SelectionTarget t = target_from(f, d);
  validate_config(cfg, d);
  Json& r = run.report();
  r["target"] = target_json(d, t);
  r["dmu_ids"] = d.dmu_ids();
  if (uses_greedy(cfg, t)) r["greedy"] = greedy_json(greedy_nested(d, cfg.p, cfg.objective, cfg.weights));
  const SelectionSolution s = solve_selection(d, cfg, t);
  r["selection"] = selection_json(d, s, run.timing());
  run.artifacts().emplace_back("efficiencies.csv", efficiencies_csv(d, s.efficiencies));
  if (f.global.oracle && !oracle_check(run, r, d, cfg, t, s)) {
    throw Failure{kSolverError, "oracle mismatch: enumeration objective differs by more than 1e-6"};
  }
}

void cmd_sweep(Run& run, const Flags& f) {
  const Dataset d = run.load();
  const SelectionConfig cfg = run.config();
  run.add_config(cfg);
  const SelectionTarget t = target_from(f, d);
  const int p_max = f.p_max.value_or(d.num_outputs());
  // Shape errors do not depend on p; per-p infeasibility is recorded per row.
  for (int p = f.p_min; p <= p_max; ++p) {
    SelectionConfig c = cfg;
    c.p = p;
    try {
      validate_config(c, d);
    } catch (const InfeasibleError&) {
    }
  }
  const std::vector<SweepRow> rows = sweep_p(d, cfg, f.p_min, p_max, t);

  Json& r = run.report();
  r["target"] = target_json(d, t);
  r["dmu_ids"] = d.dmu_ids();
  Json jrows = Json::array();
  std::ostringstream curve;
  curve << "p,objective_value,mean,marginal,selected\n";
  std::ostringstream table;
  table << "p,min,max,mean,sd,q1,q2,q3,iqr,selected\n";
  bool all_ok = true;
  bool only_infeasible = true;
  bool oracle_ok = true;
  for (const SweepRow& row : rows) {
    Json j;
    j["p"] = row.p;
    if (!row.solution) {
      all_ok = false;
      only_infeasible = only_infeasible && row.infeasible;
      j["error"] = row.error;
      jrows.push_back(j);
      continue;
    }
    const SelectionSolution& s = *row.solution;
    std::string set;
    for (int o : s.selected_outputs) set += (set.empty() ? "" : " ") + std::to_string(o + 1);
    j["selection"] = selection_json(d, s, run.timing());
    if (row.marginal) j["marginal"] = *row.marginal;
    if (f.global.oracle) {
      SelectionConfig c = cfg;
      c.p = row.p;
      oracle_ok = oracle_check(run, j, d, c, t, s) && oracle_ok;
    }
    jrows.push_back(j);
    const EfficiencySummary& m = *row.summary;
    curve << row.p << ',' << format_number(s.objective_value) << ',' << format_number(m.mean) << ','
          << (row.marginal ? format_number(*row.marginal) : "") << ',' << set << '\n';
    table << row.p << ',' << format_number(m.min) << ',' << format_number(m.max) << ',' << format_number(m.mean)
          << ',' << format_number(m.std_dev) << ',' << format_number(m.q1) << ',' << format_number(m.q2) << ','
          << format_number(m.q3) << ',' << format_number(m.iqr) << ',' << set << '\n';
    run.artifacts().emplace_back("histogram_p" + std::to_string(row.p) + ".csv",
                                 efficiency_histogram_csv(s.efficiencies));
  }
  r["rows"] = jrows;
  run.artifacts().emplace_back("vp_curve.csv", curve.str());
  run.artifacts().emplace_back("summary.csv", table.str());
  if (!oracle_ok) throw Failure{kSolverError, "oracle mismatch: enumeration objective differs by more than 1e-6"};
  if (!all_ok) {
    throw Failure{only_infeasible ? kInfeasible : kSolverError, "some values of p failed; see the report rows"};
  }
}

void cmd_game(Run& run, const Flags& f) {
  (void)f;
  const Dataset d = run.load();
  const SelectionConfig cfg = run.config();
  run.add_config(cfg);
  validate_config(cfg, d);
  const CrossEfficiencyMatrix m = cross_efficiency(d, cfg);
  const SupportProfile prof = support_profile(m);

  Json& r = run.report();
  r["dmu_ids"] = d.dmu_ids();
  r["joint"] = selection_json(d, m.joint, run.timing());
  Json indiv = Json::array();
  for (std::size_t k = 0; k < m.individual.size(); ++k) {
    Json j;
    j["dmu"] = static_cast<int>(k) + 1;
    Json sel = Json::array();
    for (int o : m.individual[k].selected_outputs) sel.push_back(o + 1);
    j["selected_outputs"] = sel;
    j["objective_value"] = m.individual[k].objective_value;
    j["status"] = milp::to_string(m.individual[k].status);
    indiv.push_back(j);
  }
  r["individual"] = indiv;
  r["support"] = prof.pi;
  r["support_histogram"] = prof.bins;
  const auto majority = std::count_if(prof.pi.begin(), prof.pi.end(), [](double v) { return v >= 50.0; });
  r["strategies_with_majority_support"] = majority;

  std::ostringstream pi;
  pi << "id,support\n";
  for (std::size_t k = 0; k < prof.pi.size(); ++k) pi << d.dmu_ids()[k] << ',' << format_number(prof.pi[k]) << '\n';
  run.artifacts().emplace_back("delta.csv", matrix_csv(d.dmu_ids(), m.delta));
  run.artifacts().emplace_back("support.csv", pi.str());
  run.artifacts().emplace_back("support_histogram.csv", support_histogram_csv(prof.bins));
}

void cmd_validate(Run& run, const Flags& f) {
  std::ifstream in(f.global.data, std::ios::binary);
  if (!in) throw DataError(DataErrorKind::Io, "cannot open " + f.global.data);
  ParsedTable t = parse_dataset_csv(in);
  Json violations = Json::array();
  for (const DataIssue& i : t.issues) {
    violations.push_back({{"kind", to_string(i.kind)}, {"message", i.message}, {"row", i.row}, {"column", i.column}});
  }
  Json& r = run.report();
  r["valid"] = t.issues.empty();
  r["violations"] = violations;
  for (Eigen::Index o = 0; o < t.outputs.cols(); ++o) {
    if (t.outputs.rows() > 0 && t.outputs.col(o).maxCoeff() == t.outputs.col(o).minCoeff()) {
      run.warn("output '" + t.output_names[static_cast<std::size_t>(o)] + "': zero range, left unnormalized");
    }
  }
  for (Eigen::Index k = 0; k < t.outputs.rows(); ++k) {
    if (t.outputs.cols() > 0 && t.outputs.row(k).isZero(0.0)) {
      run.warn("DMU '" + t.dmu_ids[static_cast<std::size_t>(k)] + "': all outputs are zero");
    }
  }
  if (!t.issues.empty()) {
    std::string msg = std::to_string(t.issues.size()) + " invariant violation(s):";
    for (const DataIssue& i : t.issues) msg += "\n  " + i.message;
    throw Failure{kDataError, msg};
  }
  const Dataset d = to_dataset(std::move(t));
  r["dataset"] = dataset_digest(d);
  run.artifacts().emplace_back("correlation.csv", matrix_csv(d.output_names(), correlation_matrix(d)));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Output selection for data envelopment analysis", "deafs"};
  app.set_version_flag("--version", DEAFS_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--data", f.global.data, "Dataset CSV (id,in:<name>...,out:<name>...)")->required();
  app.add_option("--config", f.global.config, "Selection config (key=value lines)");
  app.add_option("--out", f.global.out, "Directory for report.json and CSV artifacts");
  app.add_option("--seed", f.global.seed, "Recorded in the report; every command is deterministic");
  app.add_flag("--oracle", f.global.oracle, "Cross-check selections against enumeration");
  app.add_flag("--no-normalize", f.global.no_normalize, "Keep outputs in their original units");
  app.add_flag("--no-timestamp", f.global.no_timestamp, "Omit timestamp and wall-clock fields");

  auto* eff = app.add_subcommand("eff", "Efficiencies of all DMUs");
  eff->add_option("--outputs", f.outputs, "Restrict to these outputs (1-based, comma separated)");
  auto* select = app.add_subcommand("select", "Solve one selection problem");
  auto* sweep = app.add_subcommand("sweep", "Solve the selection problem for a range of p");
  for (auto* sub : {select, sweep}) {
    sub->add_option("--mode", f.mode, "joint or individual")->check(CLI::IsMember({"joint", "individual"}));
    sub->add_option("--dmu", f.dmu, "DMU for individual mode (1-based)");
  }
  sweep->add_option("--p-min", f.p_min, "Smallest p")->check(CLI::PositiveNumber);
  sweep->add_option("--p-max", f.p_max, "Largest p (default: number of outputs)");
  auto* game = app.add_subcommand("game", "Cross-efficiency of joint and individual selections");
  auto* validate = app.add_subcommand("validate", "Check a dataset and emit correlation data");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kDataError;
  }

  Run run(args, f);
  int code = kOk;
  std::string message;
  try {
    if (eff->parsed()) cmd_eff(run, f);
    if (select->parsed()) cmd_select(run, f);
    if (sweep->parsed()) cmd_sweep(run, f);
    if (game->parsed()) cmd_game(run, f);
    if (validate->parsed()) cmd_validate(run, f);
  } catch (const Failure& e) {
    code = e.code;
    message = e.message;
  } catch (const DataError& e) {
    code = kDataError;
    message = e.what();
  } catch (const ConfigError& e) {
    code = kDataError;
    message = e.what();
  } catch (const InfeasibleError& e) {
    code = kInfeasible;
    message = std::string("infeasible: ") + e.what();
  } catch (const CapExceeded& e) {
    code = kSolverError;
    message = e.what();
  } catch (const SolverError& e) {
    code = kSolverError;
    message = e.what();
  }
  if (code != kOk) run.report()["error"] = {{"exit_code", code}, {"message", message}};
  try {
    out << run.finish();
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  if (code != kOk) err << "error: " << message << '\n';
  return code;
}

}  // namespace deafs::cli
