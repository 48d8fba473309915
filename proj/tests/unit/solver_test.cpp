#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "hmfsvm/error.hpp"
#include "hmfsvm/solver.hpp"
#include "oracles.hpp"

namespace hmfsvm {
namespace {

oracle::Matrix dense(const GramMatrix& g) {
  oracle::Matrix m(g.size(), std::vector<double>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) m[i][j] = g(i, j);
  }
  return m;
}

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

TEST(Solver, MatchesProjectedGradientOracle) {
  for (std::uint64_t seed = 100; seed < 115; ++seed) {
    const auto inst = testing::random_dual_instance(seed);
    const GramMatrix g = gram(inst.kernel, inst.points);
    const TrainedSvm m = solve(g, inst.labels, inst.memberships, inst.config);
    ASSERT_TRUE(m.converged) << "seed " << seed;
    const auto ref = oracle::projected_gradient_dual(dense(g), inst.labels, m.upper_bounds);
    EXPECT_NEAR(m.objective, ref.objective, 1e-6) << "seed " << seed;
    EXPECT_GE(m.objective, ref.objective - 1e-9) << "seed " << seed;
  }
}

TEST(Solver, DualFeasibility) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = testing::random_dual_instance(seed);
    const GramMatrix g = gram(inst.kernel, inst.points);
    const TrainedSvm m = solve(g, inst.labels, inst.memberships, inst.config);
    double balance = 0.0;
    for (std::size_t i = 0; i < m.alphas.size(); ++i) {
      const double cap = inst.config.C * inst.memberships[i] * inst.config.costs.of(inst.labels[i]);
      EXPECT_DOUBLE_EQ(m.upper_bounds[i], cap);
      EXPECT_GE(m.alphas[i], 0.0);
      EXPECT_LE(m.alphas[i], cap);
      balance += m.alphas[i] * inst.labels[i];
    }
    EXPECT_LE(std::abs(balance), 1e-8);
  }
}

TEST(Solver, KktViolationBelowToleranceScale) {
  for (std::uint64_t seed = 40; seed < 60; ++seed) {
    const auto inst = testing::random_dual_instance(seed);
    const GramMatrix g = gram(inst.kernel, inst.points);
    const TrainedSvm m = solve(g, inst.labels, inst.memberships, inst.config);
    EXPECT_LT(kkt_report(m, g), 1e-6) << "seed " << seed;
  }
}

TEST(Solver, ObjectiveTraceNeverDecreases) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_dual_instance(seed);
    const GramMatrix g = gram(inst.kernel, inst.points);
    std::vector<double> trace;
    const TrainedSvm m = solve(g, inst.labels, inst.memberships, inst.config, &trace);
    ASSERT_FALSE(trace.empty());
    for (std::size_t t = 1; t < trace.size(); ++t) EXPECT_GE(trace[t], trace[t - 1] - 1e-12);
    EXPECT_NEAR(trace.back(), m.objective, 1e-9);
  }
}

TEST(Solver, DecisionValueAgreesWithGramRows) {
  const auto inst = testing::random_dual_instance(7);
  const GramMatrix g = gram(inst.kernel, inst.points);
  const TrainedSvm m = solve(g, inst.labels, inst.memberships, inst.config);
  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    double f = m.bias;
    for (std::size_t j = 0; j < inst.points.size(); ++j) f += m.alphas[j] * m.labels[j] * g(i, j);
    EXPECT_NEAR(decision_value(m, inst.points[i], inst.points), f, 1e-12);
  }
}

TEST(Solver, SeparableProblemClassifiesTrainingSet) {
  const Dataset d = testing::separable_2d(15, 2);
  const GramMatrix g = gram({KernelFamily::Linear, 1.0, 0.0}, d.features);
  SolverConfig cfg;
  cfg.C = 100.0;
  const TrainedSvm m = solve(g, d.labels, ones(d.size()), cfg);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GT(d.labels[i] * decision_value(m, d.features[i], d.features), 0.0);
  }
  EXPECT_LT(m.support_indices.size(), d.size());
}

TEST(Solver, IndefiniteSigmoidKernelTerminates) {
  const Dataset d = testing::xor_square(40, 5);
  const GramMatrix g = gram({KernelFamily::Sigmoid, 4.0, -1.0}, d.features);
  SolverConfig cfg;
  cfg.C = 10.0;
  const TrainedSvm m = solve(g, d.labels, ones(d.size()), cfg);
  EXPECT_TRUE(std::isfinite(m.objective));
  EXPECT_TRUE(std::isfinite(m.bias));
  EXPECT_LE(m.iterations, std::max<std::size_t>(100000, 1000 * d.size()));
  double balance = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(m.alphas[i], 0.0);
    EXPECT_LE(m.alphas[i], cfg.C);
    balance += m.alphas[i] * d.labels[i];
  }
  EXPECT_NEAR(balance, 0.0, 1e-8);
}

TEST(Solver, IterationCapIsHonoured) {
  const Dataset d = testing::xor_square(60, 9);
  const GramMatrix g = gram({KernelFamily::Rbf, 1.0, 0.0}, d.features);
  SolverConfig cfg;
  cfg.C = 1000.0;
  cfg.max_iterations = 3;
  const TrainedSvm m = solve(g, d.labels, ones(d.size()), cfg);
  EXPECT_EQ(m.iterations, 3u);
  EXPECT_FALSE(m.converged);
}

TEST(Solver, RejectsBadInputs) {
  const Dataset d = testing::separable_2d(3, 1);
  const GramMatrix g = gram({KernelFamily::Linear, 1.0, 0.0}, d.features);
  SolverConfig cfg;
  std::vector<double> sp = ones(d.size());
  std::vector<int> one_class(d.size(), 1);
  EXPECT_THROW(solve(g, one_class, sp, cfg), TrainingError);
  sp[0] = 0.0;
  EXPECT_THROW(solve(g, d.labels, sp, cfg), InputError);
  sp[0] = 1.0;
  EXPECT_THROW(solve(g, d.labels, std::vector<double>(2, 1.0), cfg), InputError);
  cfg.C = -1.0;
  EXPECT_THROW(solve(g, d.labels, sp, cfg), ConfigError);
}

TEST(Solver, InverseFrequencyCosts) {
  const std::vector<int> y{1, -1, -1, -1, 1, -1, -1, -1};
  const ClassCosts c = inverse_frequency_costs(y);
  EXPECT_DOUBLE_EQ(c.negative, 1.0);
  EXPECT_DOUBLE_EQ(c.positive, 3.0);
}

TEST(Solver, DualObjectiveOfZeroIsZero) {
  const auto inst = testing::random_dual_instance(3);
  const GramMatrix g = gram(inst.kernel, inst.points);
  const std::vector<double> zero(inst.points.size(), 0.0);
  EXPECT_EQ(dual_objective(zero, inst.labels, g), 0.0);
}

}  // namespace
}  // namespace hmfsvm
