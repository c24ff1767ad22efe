#include <gtest/gtest.h>

#include <sstream>

#include "deafs/errors.hpp"
#include "deafs/lp_format.hpp"
#include "deafs/model.hpp"

using namespace deafs;
using namespace deafs::milp;

TEST(Model, NamesAndEvaluation) {
  MilpModel m(Sense::Maximize);
  const int x = m.add_continuous("x", 0, 4, 2.0);
  const int z = m.add_binary("z", 1.0);
  m.add_constraint("cap", {{x, 1.0}, {z, 3.0}}, Relation::LessEqual, 5.0);
  m.set_objective_offset(0.5);
  EXPECT_EQ(m.find_variable("z"), z);
  EXPECT_EQ(m.find_variable("nope"), -1);
  EXPECT_DOUBLE_EQ(m.evaluate_objective({2.0, 1.0}), 5.5);
  EXPECT_DOUBLE_EQ(m.max_violation({2.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(m.max_violation({4.0, 1.0}), 2.0);
  EXPECT_DOUBLE_EQ(m.max_violation({5.0, 0.0}), 1.0);
}

TEST(Model, QuadraticTermsEvaluate) {
  MilpModel m(Sense::Minimize);
  const int e = m.add_continuous("e", 0, 1);
  m.add_quadratic_term({"q", 1.0, {{e, 1.0}}, 0.0, 0.5, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(m.evaluate_objective({0.6}), 0.5 * 0.16);
}

TEST(Model, ValidateRejectsBrokenModels) {
  {
    MilpModel m;
    m.add_continuous("x", 2, 1);
    EXPECT_THROW(m.validate(), SolverError);
  }
  {
    MilpModel m;
    m.add_variable("b", VarKind::Binary, 0, 2);
    EXPECT_THROW(m.validate(), SolverError);
  }
  {
    MilpModel m;
    m.add_continuous("x", 0, 1);
    m.add_constraint("c", {{3, 1.0}}, Relation::LessEqual, 1.0);
    EXPECT_THROW(m.validate(), SolverError);
  }
  {
    MilpModel m(Sense::Maximize);
    const int x = m.add_continuous("x", 0, 1);
    m.add_quadratic_term({"q", 1.0, {{x, 1.0}}});
    EXPECT_THROW(m.validate(), SolverError);
  }
}

TEST(LpFormat, WritesSectionsAndBinaries) {
  MilpModel m(Sense::Maximize);
  const int x = m.add_continuous("x", 0, 4, 2.0);
  const int z = m.add_binary("z", -1.0);
  m.add_constraint("cap", {{x, 1.0}, {z, 3.0}}, Relation::LessEqual, 5.0);
  std::ostringstream out;
  write_lp(out, m);
  const std::string s = out.str();
  EXPECT_NE(s.find("Maximize\n obj: 2 x - 1 z"), std::string::npos) << s;
  EXPECT_NE(s.find(" cap: 1 x + 3 z <= 5"), std::string::npos) << s;
  EXPECT_NE(s.find(" 0 <= x <= 4"), std::string::npos) << s;
  EXPECT_NE(s.find("Binaries\n z\n"), std::string::npos) << s;
  EXPECT_NE(s.find("End\n"), std::string::npos);
}

TEST(LpFormat, ExpandsQuadraticObjective) {
  MilpModel m(Sense::Minimize);
  const int e = m.add_continuous("e", 0, 1);
  m.add_quadratic_term({"q", 1.0, {{e, 1.0}}, 0.0, 1.0, 0.0, 1.0});
  std::ostringstream out;
  write_lp(out, m);
  // (1 - e)^2 = 1 - 2 e + [ 2 e^2 ] / 2
  EXPECT_NE(out.str().find("obj: - 2 e + [ 2 e ^ 2 ] / 2 + 1"), std::string::npos) << out.str();
}
