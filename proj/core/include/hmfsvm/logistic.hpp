#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hmfsvm/dataset.hpp"

namespace hmfsvm {

class TokenReader;
class TokenWriter;

// L2-regularised logistic regression used as the comparison baseline.
struct LogisticModel {
  static constexpr const char* kSchema = "hmfsvm-logistic";
  static constexpr int kVersion = 1;

  Vector weights;
  double intercept = 0.0;
  std::size_t iterations = 0;
  bool converged = false;  // false: max_iter reached before the gradient test passed

  double predict_prob(std::span<const double> x) const;

  void write(TokenWriter& out) const;
  static LogisticModel read(TokenReader& in);
};

/// Negative log-likelihood plus l2/2 |w|^2; the intercept is not penalised.
double logistic_objective(const LogisticModel& model, const Dataset& data, double l2_strength);
/// Gradient of logistic_objective, weights first, intercept last.
Vector logistic_gradient(const LogisticModel& model, const Dataset& data, double l2_strength);

/// Damped Newton iterations from the zero model until the gradient max-norm
/// drops below 1e-10 per sample or max_iter is reached.
LogisticModel logistic_baseline(const Dataset& data, double l2_strength, std::size_t max_iter = 100);

}  // namespace hmfsvm
