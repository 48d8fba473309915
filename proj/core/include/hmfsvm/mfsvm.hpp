#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmfsvm/calibration.hpp"
#include "hmfsvm/dataset.hpp"
#include "hmfsvm/kernel.hpp"
#include "hmfsvm/membership.hpp"
#include "hmfsvm/solver.hpp"

namespace hmfsvm {

class TokenReader;
class TokenWriter;

struct MfsvmConfig {
  KernelSpec kernel;
  double C = 1.0;
  MembershipSpec membership;
  ClassCosts costs;
  double tol = 1e-6;
  std::size_t max_iterations = 0;
  bool calibrate = true;
  // Platt scaling is fitted on held-out decision values from this many
  // class-stratified folds; 0 or 1, or too few samples per class for the
  // folds, falls back to the training decision values.
  std::size_t platt_folds = 5;
};

/// A trained fuzzy SVM. The membership scheme decides the variant: uniform
/// is a plain C-SVM, input_space an FSVM, kernel_space an MFSVM. Only the
/// support set is retained.
struct MfsvmModel {
  static constexpr const char* kSchema = "hmfsvm-mfsvm";
  static constexpr int kVersion = 1;

  KernelSpec kernel;
  MembershipSpec membership_spec;
  double C = 1.0;
  ClassCosts costs;
  std::vector<Vector> support_vectors;
  std::vector<double> support_alphas;
  std::vector<int> support_labels;
  double bias = 0.0;
  std::vector<double> memberships;  // one per training sample
  std::optional<PlattCalibration> platt;
  std::size_t n_train = 0;
  std::size_t iterations = 0;
  bool converged = false;

  std::size_t dim() const noexcept {
    return support_vectors.empty() ? 0 : support_vectors.front().size();
  }
  std::size_t support_count() const noexcept { return support_vectors.size(); }

  double decision_value(std::span<const double> x) const;
  // sign of the decision value; an exact 0 maps to +1.
  int predict_label(std::span<const double> x) const;
  // Platt probability of the positive class; StateError if uncalibrated.
  double predict_prob(std::span<const double> x) const;

  void write(TokenWriter& out) const;
  static MfsvmModel read(TokenReader& in);

  std::string to_string() const;
  static MfsvmModel from_string(const std::string& text);
};

/// Memberships -> per-sample caps -> dual solve -> Platt fit. Needs at least
/// two samples of each class.
MfsvmModel train(const Dataset& data, const MfsvmConfig& config);

/// Same, with caller-supplied memberships in (0, 1] instead of the ones the
/// configured scheme would compute. The scheme is still recorded.
MfsvmModel train(const Dataset& data, const MfsvmConfig& config,
                 std::span<const double> memberships);

int label_from_decision(double decision) noexcept;

}  // namespace hmfsvm
