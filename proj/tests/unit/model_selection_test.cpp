#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "hmfsvm/error.hpp"
#include "hmfsvm/model_selection.hpp"

namespace hmfsvm {
namespace {

CvSettings rbf_settings() {
  CvSettings s;
  s.family = KernelFamily::Rbf;
  s.seed = 3;
  return s;
}

GridSpec small_grid() {
  GridSpec g;
  g.c_exponents = {-1.0, 1.0, 3.0};
  g.gamma_exponents = {-3.0, -1.0, 1.0};
  g.fine_step = 0.5;
  g.fine_radius = 1.0;
  return g;
}

TEST(Folds, HundredIntoFiveGivesDisjointTwenties) {
  std::vector<int> labels(100);
  for (std::size_t i = 0; i < 100; ++i) labels[i] = i < 30 ? 1 : -1;
  const auto folds = nu_fold_split(labels, 5, 9);
  ASSERT_EQ(folds.size(), 5u);
  std::set<std::size_t> seen;
  for (const auto& f : folds) {
    EXPECT_EQ(f.size(), 20u);
    std::size_t pos = 0;
    for (std::size_t i : f) {
      EXPECT_TRUE(seen.insert(i).second) << "index " << i << " in two folds";
      pos += labels[i] > 0;
    }
    EXPECT_EQ(pos, 6u);
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(Folds, SizesAndClassCountsBalancedProperty) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 80;
    const std::size_t nu = 2 + rng() % std::min<std::size_t>(9, n - 1);
    std::vector<int> labels(n);
    for (auto& y : labels) y = rng() % 3 == 0 ? 1 : -1;
    const auto folds = nu_fold_split(labels, nu, rng());
    std::size_t total = 0, smallest = n, largest = 0;
    const double pos_total = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
    for (const auto& f : folds) {
      total += f.size();
      smallest = std::min(smallest, f.size());
      largest = std::max(largest, f.size());
      double pos = 0.0;
      for (std::size_t i : f) pos += labels[i] > 0;
      EXPECT_LE(std::abs(pos - pos_total / static_cast<double>(nu)), 1.0);
    }
    EXPECT_EQ(total, n);
    EXPECT_LE(largest - smallest, 1u);
  }
}

TEST(Folds, RejectsImpossibleSplits) {
  const std::vector<int> labels{1, -1, 1};
  EXPECT_THROW(nu_fold_split(labels, 4, 0), ConfigError);
  EXPECT_THROW(nu_fold_split(labels, 1, 0), ConfigError);
}

TEST(CrossValidation, PredictsEveryInstanceOnce) {
  const Dataset d = testing::gaussian_blobs(23, 2, 2.0, 1.0, 5);
  const CvResult r = cross_validate(d, 1.0, 0.5, rbf_settings());
  ASSERT_EQ(r.times_predicted.size(), d.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(r.times_predicted[i], 1u);
    EXPECT_TRUE(r.predictions[i] == 1 || r.predictions[i] == -1);
    correct += r.predictions[i] == d.labels[i];
  }
  EXPECT_DOUBLE_EQ(r.accuracy, static_cast<double>(correct) / static_cast<double>(d.size()));
  EXPECT_GT(r.accuracy, 0.8);
}

TEST(GridSearch, FineBestNoWorseThanCoarseBest) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Dataset d = testing::gaussian_blobs(20, 2, 1.2, 1.0, seed);
    const GridSearchReport r = grid_search(d, small_grid(), rbf_settings());
    EXPECT_GE(r.best_fine.cv_accuracy, r.best_coarse.cv_accuracy);
    EXPECT_EQ(r.coarse.size(), 9u);
    bool contains_coarse_best = false;
    for (const auto& c : r.fine) {
      EXPECT_LE(std::abs(c.c_exp - r.best_coarse.c_exp), 1.0 + 1e-12);
      EXPECT_LE(std::abs(c.gamma_exp - r.best_coarse.gamma_exp), 1.0 + 1e-12);
      contains_coarse_best |= c.c_exp == r.best_coarse.c_exp && c.gamma_exp == r.best_coarse.gamma_exp;
    }
    EXPECT_TRUE(contains_coarse_best);
  }
}

std::string csv_of(const GridSearchReport& r) {
  std::ostringstream os;
  r.write_csv(os);
  return os.str();
}

TEST(GridSearch, IndependentOfEvaluationOrderAndThreads) {
  const Dataset d = testing::gaussian_blobs(20, 2, 1.0, 1.0, 8);
  const std::string base = csv_of(grid_search(d, small_grid(), rbf_settings()));
  for (std::uint64_t order : {1u, 2u, 3u}) {
    GridSearchOptions opt;
    opt.shuffle_order = order;
    opt.jobs = order;
    EXPECT_EQ(csv_of(grid_search(d, small_grid(), rbf_settings(), opt)), base);
  }
}

TEST(GridSearch, CsvRoundTrip) {
  const Dataset d = testing::gaussian_blobs(15, 2, 1.5, 1.0, 2);
  const GridSearchReport r = grid_search(d, small_grid(), rbf_settings());
  std::istringstream in(csv_of(r));
  const GridSearchReport back = GridSearchReport::read_csv(in);
  EXPECT_EQ(csv_of(back), csv_of(r));
  EXPECT_EQ(back.best_fine.c_exp, r.best_fine.c_exp);
  EXPECT_EQ(back.best_fine.gamma_exp, r.best_fine.gamma_exp);
  EXPECT_EQ(back.best_coarse.cv_accuracy, r.best_coarse.cv_accuracy);
}

TEST(GridSearch, TieBreaksTowardSmallerCThenGamma) {
  const std::vector<GridCell> cells{{3, 1, 0.9}, {1, 2, 0.9}, {1, -1, 0.9}, {5, -5, 0.8}};
  const GridCell best = pick_best(cells);
  EXPECT_EQ(best.c_exp, 1.0);
  EXPECT_EQ(best.gamma_exp, -1.0);
}

TEST(GridSearch, DefaultLatticeBounds) {
  const GridSpec g = GridSpec::paper_default();
  EXPECT_EQ(g.c_exponents.front(), -5.0);
  EXPECT_EQ(g.c_exponents.back(), 17.0);
  EXPECT_EQ(g.gamma_exponents.front(), -18.0);
  EXPECT_EQ(g.gamma_exponents.back(), 4.0);
  GridSpec bad = small_grid();
  bad.fine_step = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Undersample, BalancesToMinorityCount) {
  Dataset d;
  for (int i = 0; i < 1000; ++i) {
    d.features.push_back({static_cast<double>(i)});
    d.labels.push_back(i < 100 ? 1 : -1);
  }
  const Dataset b = undersample_majority(d, 4);
  EXPECT_EQ(b.size(), 200u);
  const LabelCounts c = count_labels(b.labels);
  EXPECT_EQ(c.positive, 100u);
  EXPECT_EQ(c.negative, 100u);
  for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LT(b.features[i - 1][0], b.features[i][0]);
}

}  // namespace
}  // namespace hmfsvm
