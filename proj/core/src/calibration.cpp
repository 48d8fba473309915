#include "hmfsvm/calibration.hpp"

#include <cmath>
#include <vector>

#include "hmfsvm/dataset.hpp"
#include "hmfsvm/error.hpp"

namespace hmfsvm {
namespace {

// -log-likelihood term of one sample with target t at logit z = a f + b.
double nll_term(double t, double z) {
  return z >= 0.0 ? t * z + std::log1p(std::exp(-z)) : (t - 1.0) * z + std::log1p(std::exp(z));
}

}  // namespace

double PlattCalibration::probability(double decision) const noexcept {
  const double z = a * decision + b;
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

PlattCalibration fit_platt(std::span<const double> decisions, std::span<const int> labels) {
  if (decisions.size() != labels.size() || decisions.empty()) {
    throw InputError("calibration needs one label per decision value");
  }
  const LabelCounts counts = count_labels(labels);
  const double n_pos = static_cast<double>(counts.positive);
  const double n_neg = static_cast<double>(counts.negative);
  const double hi = (n_pos + 1.0) / (n_pos + 2.0);
  const double lo = 1.0 / (n_neg + 2.0);

  std::vector<double> target(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) target[i] = labels[i] > 0 ? hi : lo;

  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;
  constexpr double kEps = 1e-5;

  PlattCalibration c{0.0, std::log((n_neg + 1.0) / (n_pos + 1.0))};
  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < decisions.size(); ++i) f += nll_term(target[i], a * decisions[i] + b);
    return f;
  };
  double fval = objective(c.a, c.b);

  for (int iter = 0; iter < kMaxIter; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
      const double z = c.a * decisions[i] + c.b;
      double p = 0.0, q = 0.0;
      if (z >= 0.0) {
        const double e = std::exp(-z);
        p = e / (1.0 + e);
        q = 1.0 / (1.0 + e);
      } else {
        const double e = std::exp(z);
        p = 1.0 / (1.0 + e);
        q = e / (1.0 + e);
      }
      const double d2 = p * q;
      h11 += decisions[i] * decisions[i] * d2;
      h22 += d2;
      h21 += decisions[i] * d2;
      const double d1 = target[i] - p;
      g1 += decisions[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;

    double step = 1.0;
    while (step >= kMinStep) {
      const double na = c.a + step * da;
      const double nb = c.b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        c = {na, nb};
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }
  return c;
}

}  // namespace hmfsvm
