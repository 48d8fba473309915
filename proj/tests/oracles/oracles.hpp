#pragma once

// Independent reference implementations used to check the library. They
// favour obviousness over speed and share no code with it.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hmfsvm::oracle {

using Matrix = std::vector<std::vector<double>>;

struct QpSolution {
  std::vector<double> alphas;
  double objective = 0.0;  // sum a - 1/2 a'Qa, Q_ij = y_i y_j K_ij
};

// Accelerated projected gradient on the SVM dual with an exact projection
// onto {0 <= a <= upper, y'a = 0}.
QpSolution projected_gradient_dual(const Matrix& kernel, std::span<const int> labels,
                                   std::span<const double> upper, std::size_t iterations = 100000);

// Euclidean projection of v onto {0 <= a <= upper, y'a = 0}.
std::vector<double> project_box_hyperplane(std::span<const double> v, std::span<const int> labels,
                                           std::span<const double> upper);

// Explicit input-space geometry, i.e. the feature space of the linear kernel.
struct ExplicitClass {
  std::vector<double> centre;
  std::vector<double> distance2;  // per member, squared distance to the centre
  double radius2 = 0.0;           // largest member distance2
};
ExplicitClass explicit_class(const Matrix& points, std::span<const std::size_t> members,
                             std::span<const std::size_t> freq);

// Mann-Whitney count in half units: 2 per correctly ordered pair, 1 per tie.
struct PairCount {
  std::uint64_t half_units = 0;
  std::uint64_t pairs = 0;
  double auc() const { return static_cast<double>(half_units) / (2.0 * static_cast<double>(pairs)); }
};
PairCount pairwise_auc(std::span<const double> scores, std::span<const int> labels);

// min(1, 2 P(X <= min(b, c))), X ~ Bin(b + c, 1/2), from exact integer
// binomial coefficients. Requires b + c <= 120.
double exact_binomial_p(std::size_t b, std::size_t c);

// Chi-square(1) upper tail by Simpson integration of the normal density.
double chi_square_1df_tail(double x);

}  // namespace hmfsvm::oracle
