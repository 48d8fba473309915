#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "hmfsvm/calibration.hpp"
#include "hmfsvm/error.hpp"
#include "hmfsvm/mfsvm.hpp"

namespace hmfsvm {
namespace {

MfsvmConfig rbf_config(MembershipScheme scheme) {
  MfsvmConfig cfg;
  cfg.kernel = {KernelFamily::Rbf, 0.5, 0.0};
  cfg.C = 4.0;
  cfg.membership.scheme = scheme;
  cfg.tol = 1e-10;
  cfg.calibrate = false;
  return cfg;
}

TEST(Mfsvm, UnitMembershipsReduceToPlainSvm) {
  Dataset d = testing::gaussian_blobs(20, 2, 1.5, 1.0, 12);
  const std::vector<double> ones(d.size(), 1.0);

  const GramMatrix g = gram({KernelFamily::Rbf, 0.5, 0.0}, d.features);
  SolverConfig sc;
  sc.C = 4.0;
  sc.tol = 1e-10;
  const TrainedSvm plain = solve(g, d.labels, ones, sc);

  for (MembershipScheme scheme : {MembershipScheme::InputSpace, MembershipScheme::KernelSpace}) {
    const MfsvmModel m = train(d, rbf_config(scheme), ones);
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_NEAR(m.decision_value(d.features[i]), decision_value(plain, d.features[i], d.features),
                  1e-8);
    }
  }
}

TEST(Mfsvm, UniformSchemeMatchesExplicitUnitMemberships) {
  const Dataset d = testing::gaussian_blobs(15, 3, 2.0, 1.0, 4);
  const MfsvmModel a = train(d, rbf_config(MembershipScheme::Uniform));
  const MfsvmModel b =
      train(d, rbf_config(MembershipScheme::KernelSpace), std::vector<double>(d.size(), 1.0));
  for (const auto& x : d.features) EXPECT_NEAR(a.decision_value(x), b.decision_value(x), 1e-10);
}

TEST(Mfsvm, MembershipsAreRecordedPerSample) {
  const Dataset d = testing::gaussian_blobs(12, 2, 2.0, 1.0, 8);
  const MfsvmModel m = train(d, rbf_config(MembershipScheme::KernelSpace));
  ASSERT_EQ(m.memberships.size(), d.size());
  EXPECT_EQ(m.n_train, d.size());
  for (double sp : m.memberships) {
    EXPECT_GE(sp, m.membership_spec.floor);
    EXPECT_LE(sp, 1.0);
  }
  for (double a : m.support_alphas) EXPECT_GT(a, 0.0);
}

TEST(Mfsvm, GivenMembershipCountMustMatch) {
  const Dataset d = testing::gaussian_blobs(5, 2, 2.0, 1.0, 1);
  EXPECT_THROW(train(d, rbf_config(MembershipScheme::Uniform), std::vector<double>(3, 1.0)),
               InputError);
}

TEST(Mfsvm, SerializationRoundTripIsExact) {
  const Dataset d = testing::gaussian_blobs(25, 3, 2.0, 1.0, 2);
  MfsvmConfig cfg = rbf_config(MembershipScheme::KernelSpace);
  cfg.calibrate = true;
  const MfsvmModel m = train(d, cfg);
  const std::string text = m.to_string();
  const MfsvmModel back = MfsvmModel::from_string(text);
  EXPECT_EQ(back.to_string(), text);
  ASSERT_TRUE(back.platt.has_value());
  EXPECT_EQ(*back.platt, *m.platt);
  for (const auto& x : d.features) {
    EXPECT_EQ(back.decision_value(x), m.decision_value(x));
    EXPECT_EQ(back.predict_prob(x), m.predict_prob(x));
  }
}

TEST(Mfsvm, ReadRejectsVersionMismatch) {
  const Dataset d = testing::gaussian_blobs(6, 2, 2.0, 1.0, 3);
  std::string text = train(d, rbf_config(MembershipScheme::Uniform)).to_string();
  text.replace(text.find(" 1"), 2, " 9");
  try {
    MfsvmModel::from_string(text);
    FAIL() << "expected a version error";
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('9'), std::string::npos) << msg;
    EXPECT_NE(msg.find('1'), std::string::npos) << msg;
  }
}

TEST(Mfsvm, UncalibratedModelRefusesProbabilities) {
  const Dataset d = testing::gaussian_blobs(6, 2, 2.0, 1.0, 3);
  const MfsvmModel m = train(d, rbf_config(MembershipScheme::Uniform));
  EXPECT_THROW(m.predict_prob(d.features[0]), StateError);
}

TEST(Mfsvm, ProbabilitiesIncreaseWithDecision) {
  const Dataset d = testing::gaussian_blobs(40, 2, 1.5, 1.0, 13);
  MfsvmConfig cfg = rbf_config(MembershipScheme::KernelSpace);
  cfg.calibrate = true;
  const MfsvmModel m = train(d, cfg);
  ASSERT_TRUE(m.platt.has_value());
  EXPECT_LT(m.platt->a, 0.0);
  for (const auto& x : d.features) {
    const double p = m.predict_prob(x);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
    EXPECT_EQ(p > 0.5, m.platt->probability(m.decision_value(x)) > 0.5);
  }
}

TEST(Mfsvm, NeedsTwoSamplesPerClass) {
  Dataset d;
  d.features = {{0.0}, {1.0}, {2.0}};
  d.labels = {1, -1, -1};
  EXPECT_THROW(train(d, rbf_config(MembershipScheme::Uniform)), TrainingError);
}

TEST(Mfsvm, PredictLabelUsesSign) {
  EXPECT_EQ(label_from_decision(0.0), 1);
  EXPECT_EQ(label_from_decision(-1e-300), -1);
  const Dataset d = testing::separable_2d(10, 4);
  MfsvmConfig cfg = rbf_config(MembershipScheme::Uniform);
  cfg.kernel = {KernelFamily::Linear, 1.0, 0.0};
  const MfsvmModel m = train(d, cfg);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(m.predict_label(d.features[i]), d.labels[i]);
}

TEST(Platt, RecoversKnownSigmoid) {
  // Decision values on a grid with labels split in proportion to the target
  // sigmoid 1 / (1 + exp(-2 f)).
  std::vector<double> f;
  std::vector<int> y;
  for (int k = -20; k <= 20; ++k) {
    const double v = k / 10.0;
    const double p = 1.0 / (1.0 + std::exp(-2.0 * v));
    const int pos = static_cast<int>(std::lround(200.0 * p));
    for (int r = 0; r < 200; ++r) {
      f.push_back(v);
      y.push_back(r < pos ? 1 : -1);
    }
  }
  const PlattCalibration c = fit_platt(f, y);
  EXPECT_NEAR(c.a, -2.0, 0.05);
  EXPECT_NEAR(c.b, 0.0, 0.05);
}

TEST(Platt, ProbabilityIsStableAtExtremes) {
  const PlattCalibration c{-1.0, 0.0};
  EXPECT_EQ(c.probability(1e6), 1.0);
  EXPECT_EQ(c.probability(-1e6), 0.0);
  EXPECT_DOUBLE_EQ(c.probability(0.0), 0.5);
}

TEST(Platt, RejectsMismatchedInput) {
  const std::vector<double> f{0.1, 0.2};
  const std::vector<int> y{1};
  EXPECT_THROW(fit_platt(f, y), InputError);
}

}  // namespace
}  // namespace hmfsvm
