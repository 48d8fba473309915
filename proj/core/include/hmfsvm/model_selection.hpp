#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hmfsvm/dataset.hpp"
#include "hmfsvm/kernel.hpp"
#include "hmfsvm/membership.hpp"
#include "hmfsvm/solver.hpp"

namespace hmfsvm {

/// Stratified fold assignment: samples of each class are shuffled with the
/// seed, positives first then negatives, and dealt round-robin. Fold sizes
/// differ by at most one and each fold's class counts are within one of
/// proportional. Throws ConfigError if n < nu or nu < 2.
std::vector<std::vector<std::size_t>> nu_fold_split(std::span<const int> labels, std::size_t nu,
                                                    std::uint64_t seed);

struct CvSettings {
  KernelFamily family = KernelFamily::Sigmoid;
  double coef0 = 0.0;
  MembershipSpec membership;
  // nullopt: inverse-frequency costs computed on each training fold.
  std::optional<ClassCosts> costs;
  std::size_t nu = 5;
  std::uint64_t seed = 0;
  double tol = 1e-3;
  std::size_t max_iterations = 0;
};

struct CvResult {
  double accuracy = 0.0;
  std::vector<int> predictions;         // held-out prediction of every sample
  std::vector<std::size_t> times_predicted;
};

/// Trains on nu - 1 folds and predicts the held-out fold, for every fold;
/// returns the pooled fraction of correct held-out predictions.
CvResult cross_validate(const Dataset& data, double C, double gamma, const CvSettings& settings);

double cv_accuracy(const Dataset& data, double C, double gamma, const CvSettings& settings);

struct GridSpec {
  std::vector<double> c_exponents;      // log2 C values of the coarse lattice
  std::vector<double> gamma_exponents;  // log2 gamma values of the coarse lattice
  double fine_step = 0.25;
  double fine_radius = 1.0;

  void validate() const;
  // C = 2^-5, 2^-3, ..., 2^17 and gamma = 2^-18, ..., 2^4.
  static GridSpec paper_default();
};

struct GridCell {
  double c_exp = 0.0;
  double gamma_exp = 0.0;
  double cv_accuracy = 0.0;
};

struct GridSearchReport {
  std::vector<GridCell> coarse;
  std::vector<GridCell> fine;
  GridCell best_coarse;
  GridCell best_fine;

  double best_accuracy() const noexcept { return best_fine.cv_accuracy; }
  // Columns pass, c_exp, gamma_exp, cv_accuracy; coarse cells then fine cells.
  void write_csv(std::ostream& out) const;
  // Inverse of write_csv; the best cells are recomputed from the rows.
  static GridSearchReport read_csv(std::istream& in);
};

struct GridSearchOptions {
  std::size_t jobs = 1;
  // Evaluate cells in a seeded random order instead of lattice order. The
  // report does not depend on it.
  std::optional<std::uint64_t> shuffle_order;
};

// Best cell: highest accuracy, then smaller C, then smaller gamma.
GridCell pick_best(const std::vector<GridCell>& cells);

/// Coarse pass over c_exponents x gamma_exponents, then a fine pass on
/// best +- fine_radius at fine_step (the lattice contains the coarse best).
GridSearchReport grid_search(const Dataset& data, const GridSpec& spec, const CvSettings& settings,
                             const GridSearchOptions& options = {});

/// Draws the majority class down to the minority count, uniformly without
/// replacement. Retained rows keep their original relative order.
Dataset undersample_majority(const Dataset& data, std::uint64_t seed);

}  // namespace hmfsvm
