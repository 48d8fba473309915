#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmfsvm/dataset.hpp"
#include "hmfsvm/kernel.hpp"

namespace hmfsvm {

// Per-class misclassification costs. The effective box bound of sample i is
// C * membership_i * cost(y_i).
struct ClassCosts {
  double positive = 1.0;
  double negative = 1.0;

  double of(int label) const noexcept { return label > 0 ? positive : negative; }
  void validate() const;

  friend bool operator==(const ClassCosts&, const ClassCosts&) = default;
};

// cost_pos / cost_neg = N_neg / N_pos, normalised so the negative cost is 1.
ClassCosts inverse_frequency_costs(std::span<const int> labels);

struct SolverConfig {
  double C = 1.0;
  double tol = 1e-6;
  // Hard cap on pairwise updates; 0 selects max(100000, 1000 n).
  std::size_t max_iterations = 0;
  // Curvature used in place of a non-positive pairwise second derivative.
  double eta_guard = 1e-12;
  ClassCosts costs;

  void validate() const;
};

struct TrainedSvm {
  std::vector<double> alphas;
  std::vector<int> labels;
  std::vector<double> upper_bounds;
  std::vector<std::size_t> support_indices;
  KernelSpec kernel;
  double bias = 0.0;
  double objective = 0.0;  // dual objective W(alpha) at the returned point
  std::size_t iterations = 0;
  bool converged = false;
};

// Dual coefficients below this count as zero when collecting support vectors.
inline constexpr double kSupportThreshold = 1e-10;

/// Maximises W(a) = sum a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij subject to
/// sum a_i y_i = 0 and 0 <= a_i <= C * sp_i * cost(y_i).
///
/// Each step moves the maximal violating pair (largest gap between
/// -y_t grad_t over the "can increase" and "can decrease" sets, lowest index
/// on ties). A non-positive pair curvature is replaced by eta_guard, and a
/// step that would not improve W stops the run. The loop ends when the gap
/// drops below tol. If `objective_trace` is given, W is appended after every
/// accepted step.
TrainedSvm solve(const GramMatrix& gram, std::span<const int> labels,
                 std::span<const double> memberships, const SolverConfig& config,
                 std::vector<double>* objective_trace = nullptr);

double dual_objective(std::span<const double> alphas, std::span<const int> labels,
                      const GramMatrix& gram);

/// sum_i a_i y_i K(x_i, x) + b over the support set.
double decision_value(const TrainedSvm& model, std::span<const double> x,
                      const std::vector<Vector>& training_points);

/// Largest per-sample KKT violation of `model` on its training Gram matrix:
/// max(0, 1 - y f) at a = 0, max(0, y f - 1) at the upper bound, |y f - 1|
/// for free coefficients.
double kkt_report(const TrainedSvm& model, const GramMatrix& gram);

}  // namespace hmfsvm
