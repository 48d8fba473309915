#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hmfsvm/error.hpp"
#include "hmfsvm/evaluation.hpp"
#include "oracles.hpp"

namespace hmfsvm {
namespace {

TEST(Confusion, CountsAndRates) {
  const std::vector<int> pred{1, 1, -1, -1, 1, -1};
  const std::vector<int> truth{1, -1, -1, 1, 1, -1};
  const ConfusionCounts c = confusion(pred, truth);
  EXPECT_EQ(c.tp, 2u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.tn, 2u);
  EXPECT_EQ(c.fn, 1u);
  const ClassificationMetrics m = metrics(c);
  EXPECT_DOUBLE_EQ(*m.sensitivity, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*m.specificity, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.accuracy, 4.0 / 6.0);
}

TEST(Confusion, EmptyClassGivesNoRate) {
  const std::vector<int> pred{1, -1};
  const std::vector<int> truth{-1, -1};
  const ClassificationMetrics m = metrics(confusion(pred, truth));
  EXPECT_FALSE(m.sensitivity.has_value());
  ASSERT_TRUE(m.specificity.has_value());
  EXPECT_DOUBLE_EQ(*m.specificity, 0.5);
}

TEST(Roc, MatchesPairCountingExactlyWithTies) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    // Few distinct levels so ties are common.
    const unsigned levels = 1 + static_cast<unsigned>(rng() % 8);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % levels) / levels;
      labels[i] = rng() % 2 ? 1 : -1;
    }
    labels[0] = 1;
    labels[1] = -1;
    const RocCurve roc = roc_auc(scores, labels);
    EXPECT_EQ(roc.auc, oracle::pairwise_auc(scores, labels).auc());
    ASSERT_GE(roc.points.size(), 2u);
    EXPECT_EQ(roc.points.front().fpr, 0.0);
    EXPECT_EQ(roc.points.front().tpr, 0.0);
    EXPECT_EQ(roc.points.back().fpr, 1.0);
    EXPECT_EQ(roc.points.back().tpr, 1.0);
    for (std::size_t k = 1; k < roc.points.size(); ++k) {
      EXPECT_GE(roc.points[k].fpr, roc.points[k - 1].fpr);
      EXPECT_GE(roc.points[k].tpr, roc.points[k - 1].tpr);
      EXPECT_LT(roc.points[k].threshold, roc.points[k - 1].threshold);
    }
  }
}

TEST(Roc, PerfectAndReversedAndConstant) {
  const std::vector<double> s{0.9, 0.8, 0.2, 0.1};
  const std::vector<int> y{1, 1, -1, -1};
  EXPECT_EQ(roc_auc(s, y).auc, 1.0);
  const std::vector<int> flipped{-1, -1, 1, 1};
  EXPECT_EQ(roc_auc(s, flipped).auc, 0.0);
  const std::vector<double> flat{0.5, 0.5, 0.5, 0.5};
  EXPECT_EQ(roc_auc(flat, y).auc, 0.5);
}

TEST(Roc, CsvStartsAtInfinityThreshold) {
  const std::vector<double> s{0.75, 0.25};
  const std::vector<int> y{1, -1};
  std::ostringstream os;
  write_roc_csv(os, roc_auc(s, y));
  EXPECT_EQ(os.str(), "threshold,fpr,tpr\ninf,0,0\n0.75,0,1\n0.25,1,1\n");
}

TEST(Roc, NeedsBothClasses) {
  const std::vector<double> s{0.1, 0.2};
  const std::vector<int> y{1, 1};
  EXPECT_THROW(roc_auc(s, y), Error);
}

TEST(McNemar, ChiSquareOnFiveAndFifteen) {
  const McNemarResult r = mcnemar_from_counts(5, 15, McNemarMethod::ChiSquare);
  EXPECT_DOUBLE_EQ(r.statistic, 4.05);
  EXPECT_NEAR(r.p_chi_square, 0.0441, 1e-3);
  EXPECT_EQ(r.p_value, r.p_chi_square);
  EXPECT_TRUE(r.significant(0.05));
  EXPECT_NEAR(r.p_chi_square, oracle::chi_square_1df_tail(4.05), 1e-9);
}

TEST(McNemar, SmallSamplesUseExactBinomial) {
  for (std::size_t b = 0; b < 25; ++b) {
    for (std::size_t c = 0; b + c < 25; ++c) {
      const McNemarResult r = mcnemar_from_counts(b, c);
      EXPECT_EQ(r.method, McNemarMethod::Exact);
      EXPECT_NEAR(r.p_value, oracle::exact_binomial_p(b, c), 1e-10) << b << "," << c;
      EXPECT_NEAR(exact_binomial_two_sided(b, c), oracle::exact_binomial_p(b, c), 1e-10);
    }
  }
}

TEST(McNemar, LargeSamplesUseChiSquareUnderAuto) {
  const McNemarResult r = mcnemar_from_counts(20, 40);
  EXPECT_EQ(r.method, McNemarMethod::ChiSquare);
  EXPECT_EQ(r.p_value, r.p_chi_square);
  EXPECT_NEAR(r.p_exact, oracle::exact_binomial_p(20, 40), 1e-10);
}

TEST(McNemar, ChiSquareTailMatchesIntegration) {
  for (double x : {0.01, 0.5, 1.0, 2.7, 4.05, 9.0, 15.0}) {
    EXPECT_NEAR(chi_square_1df_sf(x), oracle::chi_square_1df_tail(x), 1e-9);
  }
}

TEST(McNemar, DiscordanceFromPredictions) {
  const std::vector<int> truth{1, 1, 1, -1, -1, -1};
  const std::vector<int> a{1, 1, 1, -1, -1, 1};
  const std::vector<int> b{-1, -1, 1, -1, 1, 1};
  const McNemarResult r = mcnemar(a, b, truth);
  EXPECT_EQ(r.b, 3u);
  EXPECT_EQ(r.c, 0u);
  const McNemarResult same = mcnemar(a, a, truth);
  EXPECT_TRUE(same.no_discordance);
  EXPECT_EQ(same.p_value, 1.0);
}

TEST(SvRatios, Definitions) {
  const SvRatios r = sv_ratios(30, 120, 400);
  EXPECT_DOUBLE_EQ(r.sv_per_train, 0.25);
  EXPECT_DOUBLE_EQ(r.train_per_max, 0.3);
  EXPECT_DOUBLE_EQ(r.sv_per_max, 0.075);
}

TEST(Buckets, TableThresholds) {
  EXPECT_EQ(bucket_risk(0.61), RiskBucket::ImmediateRisk);
  EXPECT_EQ(bucket_risk(0.50), RiskBucket::ShortTermRisk);
  EXPECT_EQ(bucket_risk(0.39), RiskBucket::LongerTermRisk);
  EXPECT_EQ(bucket_risk(0.60), RiskBucket::ShortTermRisk);
  EXPECT_EQ(bucket_risk(0.40), RiskBucket::ShortTermRisk);
  EXPECT_EQ(bucket_risk(0.62), RiskBucket::ImmediateRisk);
  EXPECT_EQ(to_string(RiskBucket::ImmediateRisk), "ImmediateRisk");
  EXPECT_THROW(bucket_risk(1.5), InputError);
  EXPECT_THROW(bucket_risk(std::nan("")), InputError);
}

TEST(Buckets, TallyTableLayout) {
  const std::vector<double> p{0.61, 0.50, 0.39, 0.9, 0.1, 0.05};
  const BucketTally t = tally_buckets(p);
  EXPECT_EQ(t.total(), 6u);
  std::ostringstream os;
  t.write_table(os);
  EXPECT_EQ(os.str(),
            "Classification Category,Number of Vehicles\n"
            "Immediate Risk,2\n"
            "Short Term Risk,1\n"
            "Longer Term Risk,3\n"
            "Total Number of Vehicles,6\n");
}

}  // namespace
}  // namespace hmfsvm
