#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "corpus.hpp"
#include "deafs/dataset.hpp"
#include "deafs/errors.hpp"

using namespace deafs;

namespace {

ParsedTable parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset_csv(in);
}

bool has_issue(const ParsedTable& t, DataErrorKind kind) {
  for (const auto& i : t.issues) {
    if (i.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST(Dataset, ParsesHeaderLayout) {
  const ParsedTable t = parse("id,in:labor,out:a,out:b\nA,1,2,3\nB,2,0,1\n");
  ASSERT_TRUE(t.issues.empty());
  const Dataset d = to_dataset(t);
  EXPECT_EQ(d.num_dmus(), 2);
  EXPECT_EQ(d.num_inputs(), 1);
  EXPECT_EQ(d.num_outputs(), 2);
  EXPECT_EQ(d.dmu_ids()[1], "B");
  EXPECT_EQ(d.input_names()[0], "labor");
  EXPECT_EQ(d.output_names()[1], "b");
  EXPECT_DOUBLE_EQ(d.output(0, 1), 3.0);
}

TEST(Dataset, ReportsMissingOutputColumns) {
  EXPECT_TRUE(has_issue(parse("id,in:x\n1,1\n"), DataErrorKind::MissingColumn));
}

TEST(Dataset, ReportsNegativeCellWithPosition) {
  const ParsedTable t = parse("id,in:x,out:y\n1,1,2\n2,1,-3\n");
  ASSERT_TRUE(has_issue(t, DataErrorKind::NegativeValue));
  for (const auto& i : t.issues) {
    if (i.kind == DataErrorKind::NegativeValue) {
      EXPECT_EQ(i.row, 2);
      EXPECT_EQ(i.column, 3);
    }
  }
}

TEST(Dataset, ReportsNonNumericCell) {
  EXPECT_TRUE(has_issue(parse("id,in:x,out:y\n1,1,abc\n"), DataErrorKind::NonNumericCell));
}

TEST(Dataset, ReportsDuplicateIds) {
  EXPECT_TRUE(has_issue(parse("id,in:x,out:y\n1,1,2\n1,2,3\n"), DataErrorKind::DuplicateDmuId));
}

TEST(Dataset, AllZeroInputRowIsAnInvariantViolation) {
  const ParsedTable t = parse("id,in:x,out:y\n1,0,2\n2,1,3\n");
  EXPECT_TRUE(has_issue(t, DataErrorKind::InvariantViolation));
  EXPECT_THROW(to_dataset(t), DataError);
}

TEST(Dataset, EmptyFileIsRejected) {
  EXPECT_FALSE(parse("").issues.empty());
  EXPECT_TRUE(has_issue(parse("id,in:x,out:y\n"), DataErrorKind::EmptyDataset));
}

TEST(Dataset, ConstructorRejectsNaN) {
  Eigen::MatrixXd x(1, 1);
  Eigen::MatrixXd y(1, 1);
  x << 1.0;
  y << std::nan("");
  EXPECT_THROW(Dataset({"1"}, x, y, {"x"}, {"y"}), DataError);
}

TEST(Dataset, CsvRoundTripsAtTwelveDigits) {
  std::mt19937_64 rng(3);
  const Dataset d = deafs::testing::random_dataset(rng, 9, 2, 5, 1e-3, 1e4);
  std::stringstream buf;
  write_dataset_csv(buf, d);
  const Dataset back = read_dataset(buf);
  ASSERT_EQ(back.num_dmus(), 9);
  EXPECT_EQ(back.dmu_ids(), d.dmu_ids());
  EXPECT_EQ(back.output_names(), d.output_names());
  for (int k = 0; k < 9; ++k) {
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(back.input(k, i), d.input(k, i), 1e-11 * d.input(k, i));
    for (int o = 0; o < 5; ++o) EXPECT_NEAR(back.output(k, o), d.output(k, o), 1e-11 * d.output(k, o));
  }
  // A second round trip is byte-identical.
  std::stringstream again;
  write_dataset_csv(again, back);
  EXPECT_EQ(again.str(), buf.str());
}

TEST(Dataset, NormalizationDividesByRange) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(3, 1);
  Eigen::MatrixXd y(3, 2);
  y << 1, 5, 3, 5, 5, 5;
  const Dataset d = deafs::testing::make_dataset(x, y);
  std::vector<std::string> constant;
  const Dataset n = normalize_outputs(d, &constant);
  EXPECT_DOUBLE_EQ(n.output(2, 0), 5.0 / 4.0);
  EXPECT_DOUBLE_EQ(n.output(0, 1), 5.0);
  ASSERT_EQ(constant.size(), 1u);
  EXPECT_EQ(constant[0], "y2");
  const auto r = output_ranges(d);
  EXPECT_DOUBLE_EQ(r[0], 4.0);
  EXPECT_DOUBLE_EQ(r[1], 0.0);
}

TEST(Dataset, CorrelationMatrix) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(4, 1);
  Eigen::MatrixXd y(4, 3);
  y << 1, 2, 7, 2, 4, 7, 3, 6, 7, 4, 8, 7;
  const Eigen::MatrixXd rho = correlation_matrix(deafs::testing::make_dataset(x, y));
  EXPECT_NEAR(rho(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(rho(0, 0), 1.0, 1e-12);
  EXPECT_EQ(rho(0, 2), 0.0);
  EXPECT_EQ(rho(2, 2), 0.0);
  const Eigen::MatrixXi r = threshold_rule_matrix(rho, 0.9);
  EXPECT_EQ(r(0, 1), 1);
  EXPECT_EQ(r(1, 0), 1);
  EXPECT_EQ(r(0, 0), 0);
  EXPECT_EQ(r(0, 2), 0);
}
