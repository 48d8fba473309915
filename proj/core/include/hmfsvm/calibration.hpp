#pragma once

#include <span>

namespace hmfsvm {

// P(y = +1 | f) = 1 / (1 + exp(a f + b)).
struct PlattCalibration {
  double a = 0.0;
  double b = 0.0;

  double probability(double decision) const noexcept;

  friend bool operator==(const PlattCalibration&, const PlattCalibration&) = default;
};

/// Fits (a, b) by Newton's method with backtracking on the regularised
/// targets (N+ + 1)/(N+ + 2) and 1/(N- + 2). Throws InputError on mismatched
/// lengths or an empty input.
PlattCalibration fit_platt(std::span<const double> decisions, std::span<const int> labels);

}  // namespace hmfsvm
