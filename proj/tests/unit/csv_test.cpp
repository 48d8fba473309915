#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hmfsvm/csv.hpp"
#include "hmfsvm/dataset.hpp"
#include "hmfsvm/error.hpp"

namespace hmfsvm {
namespace {

TEST(Csv, QuotedFieldsAndLineNumbers) {
  std::istringstream in("a,b\n1,\"x, y\"\n2,\"multi\nline\"\n3,\"say \"\"hi\"\"\"\n");
  const CsvTable t = read_csv(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0][1], "x, y");
  EXPECT_EQ(t.rows[1][1], "multi\nline");
  EXPECT_EQ(t.rows[2][1], "say \"hi\"");
  EXPECT_EQ(t.line_numbers, (std::vector<std::size_t>{2, 3, 5}));
  EXPECT_EQ(t.column("b"), 1u);
  EXPECT_EQ(t.column("zzz"), CsvTable::npos);
}

TEST(Csv, WriteQuotesWhenNeeded) {
  std::ostringstream out;
  write_csv_row(out, {"plain", "with,comma", "with \"quote\""});
  EXPECT_EQ(out.str(), "plain,\"with,comma\",\"with \"\"quote\"\"\"\n");
  std::istringstream back("h1,h2,h3\n" + out.str());
  EXPECT_EQ(read_csv(back).rows[0][2], "with \"quote\"");
}

TEST(Csv, CrlfInput) {
  std::istringstream in("a,b\r\n1,2\r\n");
  const CsvTable t = read_csv(in);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "2");
}

TEST(Csv, DecimalIsShortestRoundTrip) {
  EXPECT_EQ(format_decimal(0.1), "0.1");
  EXPECT_EQ(format_decimal(3.0), "3");
  EXPECT_EQ(format_decimal(-0.5), "-0.5");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(format_decimal(v)), v);
  }
}

TEST(Csv, Trim) {
  EXPECT_EQ(trim("  x y\t\r\n"), "x y");
  EXPECT_EQ(trim("   "), "");
}

TEST(Dataset, ValidateAndSubset) {
  Dataset d;
  d.features = {{1.0}, {2.0}, {3.0}};
  d.labels = {1, -1, 1};
  EXPECT_NO_THROW(d.validate());
  const std::vector<std::size_t> pick{2, 0};
  const Dataset s = subset(d, pick);
  EXPECT_EQ(s.features, (std::vector<Vector>{{3.0}, {1.0}}));
  d.labels[1] = 0;
  EXPECT_THROW(d.validate(), InputError);
  d.labels[1] = -1;
  d.features[2] = {1.0, 2.0};
  EXPECT_THROW(d.validate(), InputError);
  const std::vector<int> one{1, 1};
  EXPECT_THROW(require_both_classes(one, "test"), TrainingError);
}

}  // namespace
}  // namespace hmfsvm
