#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "app.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const std::string kData = DEAFS_DATA_DIR;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "deafs");
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = deafs::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string ce1() { return kData + "/counterexample1.csv"; }
std::string ce2() { return kData + "/counterexample2.csv"; }

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("deafs_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, EffReportsEfficiencies) {
  const Result r = run({"--data", ce2(), "--no-timestamp", "eff", "--outputs", "2,3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json all = r.json();
  for (double e : all["efficiencies"]) EXPECT_NEAR(e, 1.0, 1e-9);

  const Result one = run({"--data", ce1(), "eff", "--outputs", "1"});
  ASSERT_EQ(one.code, 0) << one.err;
  const Json j = one.json();
  const double want[] = {0.6, 0.7, 0.8, 0.9, 1.0};
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(j["efficiencies"][k].get<double>(), want[k], 1e-9);
  EXPECT_TRUE(j.contains("timestamp"));
  EXPECT_EQ(j["normalized"], true);
}

TEST(Cli, SelectJointAndIndividual) {
  TempDir tmp;
  const std::string p3 = tmp.file("p3.cfg", "p=3\n");
  const Result r = run({"--data", ce1(), "--config", p3, "--oracle", "select"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["selection"]["selected_outputs"], Json({2, 3, 4}));
  EXPECT_NEAR(j["selection"]["objective_value"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(j["oracle"]["match"], true);

  const std::string p1 = tmp.file("p1.cfg", "p=1\n");
  const Result ind = run({"--data", ce2(), "--config", p1, "select", "--mode", "individual", "--dmu", "1"});
  ASSERT_EQ(ind.code, 0) << ind.err;
  EXPECT_EQ(ind.json()["selection"]["selected_outputs"], Json({3}));

  const std::string pct = tmp.file("pct.cfg", "p=2\nobjective=percentile\npi=50\n");
  const Result per = run({"--data", ce2(), "--config", pct, "select"});
  ASSERT_EQ(per.code, 0) << per.err;
  EXPECT_NEAR(per.json()["selection"]["objective_value"].get<double>(), 1.0, 1e-6);
}

TEST(Cli, SweepWritesArtifacts) {
  TempDir tmp;
  const fs::path out = tmp.path() / "sweep";
  const Result r = run({"--data", ce1(), "--out", out.string(), "--no-timestamp", "sweep", "--p-max", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(slurp(out / "report.json"));
  const double want[] = {0.8, 13.0 / 15.0, 1.0};
  ASSERT_EQ(j["rows"].size(), 3u);
  for (int t = 0; t < 3; ++t) {
    EXPECT_NEAR(j["rows"][t]["selection"]["objective_value"].get<double>(), want[t], 1e-6);
    EXPECT_FALSE(j["rows"][t]["selection"].contains("wall_time"));
  }
  for (const char* f : {"vp_curve.csv", "summary.csv", "histogram_p1.csv", "histogram_p3.csv"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  std::istringstream curve(slurp(out / "vp_curve.csv"));
  std::string line;
  std::getline(curve, line);
  EXPECT_EQ(line, "p,objective_value,mean,marginal,selected");
  std::getline(curve, line);
  EXPECT_EQ(line.substr(0, 6), "1,0.8,");
}

TEST(Cli, ReportsAreReproducible) {
  TempDir tmp;
  const fs::path a = tmp.path() / "a";
  const fs::path b = tmp.path() / "b";
  const std::string p2 = tmp.file("p2.cfg", "p=2\n");
  for (const auto& dir : {a, b}) {
    ASSERT_EQ(run({"--data", ce2(), "--config", p2, "--out", dir.string(), "--no-timestamp", "--seed", "3", "select"})
                  .code,
              0);
  }
  // The command line differs only in the output directory.
  Json ja = Json::parse(slurp(a / "report.json"));
  Json jb = Json::parse(slurp(b / "report.json"));
  ja.erase("command");
  jb.erase("command");
  EXPECT_EQ(ja.dump(), jb.dump());
  EXPECT_EQ(ja["seed"], 3);
  EXPECT_EQ(slurp(a / "efficiencies.csv"), slurp(b / "efficiencies.csv"));
}

TEST(Cli, EfficiencyCsvLoadsBack) {
  TempDir tmp;
  const fs::path out = tmp.path() / "eff";
  ASSERT_EQ(run({"--data", ce1(), "--out", out.string(), "eff"}).code, 0);
  std::istringstream csv(slurp(out / "efficiencies.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "id,efficiency");
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto comma = line.find(',');
    ASSERT_NE(comma, std::string::npos);
    const double e = std::stod(line.substr(comma + 1));
    EXPECT_GT(e, 0.0);
    EXPECT_LE(e, 1.0 + 1e-12);
    ++rows;
  }
  EXPECT_EQ(rows, 5);
}

TEST(Cli, ValidateWarnsAboutConstantOutputs) {
  TempDir tmp;
  const std::string data = tmp.file("c.csv", "id,in:x,out:a,out:b\n1,1,0.5,2\n2,2,0.7,2\n3,1,0.2,2\n");
  const Result r = run({"--data", data, "validate"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  bool warned = false;
  for (const auto& w : j["warnings"]) warned = warned || w.get<std::string>().find("'b'") != std::string::npos;
  EXPECT_TRUE(warned);
}

TEST(Cli, ExitCodes) {
  TempDir tmp;
  EXPECT_EQ(run({"--data", (tmp.path() / "missing.csv").string(), "eff"}).code, 2);
  const std::string bad = tmp.file("bad.csv", "id,in:x,out:y\n1,0,1\n2,1,1\n");
  EXPECT_EQ(run({"--data", bad, "validate"}).code, 2);
  const std::string cfg = tmp.file("bad.cfg", "objective=median\n");
  EXPECT_EQ(run({"--data", ce1(), "--config", cfg, "select"}).code, 2);
  const std::string budget = tmp.file("budget.cfg", "p=2\ncost.c=3,4,5,6\ncost.C=6\n");
  const Result inf = run({"--data", ce1(), "--config", budget, "select"});
  EXPECT_EQ(inf.code, 4);
  EXPECT_NE(inf.err.find("infeasible"), std::string::npos);
  EXPECT_EQ(inf.json()["error"]["exit_code"], 4);
  EXPECT_EQ(run({"--data", ce1(), "frobnicate"}).code, 2);
  EXPECT_EQ(run({"--data", ce1()}).code, 2);
  EXPECT_EQ(run({"--data", ce1(), "select", "--mode", "individual", "--dmu", "9"}).code, 2);
}
