#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hmfsvm {

struct MfsvmModel;

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;

  std::size_t total() const noexcept { return tp + fn + tn + fp; }
};

// Predictions and truth are labels in {-1, +1}.
ConfusionCounts confusion(std::span<const int> predicted, std::span<const int> truth);

// Rates whose denominator is empty are nullopt, never a silent 0.
struct ClassificationMetrics {
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  double accuracy = 0.0;
};

ClassificationMetrics metrics(const ConfusionCounts& counts);

struct RocPoint {
  double threshold = 0.0;  // +inf for the (0, 0) start
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  double auc = 0.0;
  std::vector<RocPoint> points;
};

/// Sweeps every distinct score as a threshold, highest first, with tied
/// scores entering together. The trapezoid area is accumulated in integer
/// half-units, so it equals the Mann-Whitney pair count (ties worth one half)
/// exactly.
RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels);

void write_roc_csv(std::ostream& out, const RocCurve& curve);

enum class McNemarMethod { Auto, ChiSquare, Exact };

/// Paired comparison of two classifiers. b counts samples A gets right and B
/// wrong; c the reverse. Both the continuity-corrected chi-square p-value
/// (1 df) and the exact two-sided binomial p-value are computed; `p_value`
/// is the exact one when b + c < 25 under Auto.
struct McNemarResult {
  std::size_t b = 0;
  std::size_t c = 0;
  double statistic = 0.0;  // max(0, |b - c| - 1)^2 / (b + c)
  double p_chi_square = 1.0;
  double p_exact = 1.0;
  double p_value = 1.0;
  McNemarMethod method = McNemarMethod::Auto;  // the method that produced p_value
  bool no_discordance = false;

  bool significant(double alpha) const noexcept { return p_value < alpha; }
};

inline constexpr std::size_t kMcNemarExactBelow = 25;

McNemarResult mcnemar_from_counts(std::size_t b, std::size_t c,
                                  McNemarMethod method = McNemarMethod::Auto);
McNemarResult mcnemar(std::span<const int> preds_a, std::span<const int> preds_b,
                      std::span<const int> labels, McNemarMethod method = McNemarMethod::Auto);

// Upper tail of the chi-square distribution with one degree of freedom.
double chi_square_1df_sf(double x);
// min(1, 2 P(X <= min(b, c))) for X ~ Binomial(b + c, 1/2).
double exact_binomial_two_sided(std::size_t b, std::size_t c);

struct SvRatios {
  double sv_per_train = 0.0;   // R_sv/tr
  double train_per_max = 0.0;  // R_tr/max
  double sv_per_max = 0.0;     // R_sv/max
};

SvRatios sv_ratios(std::size_t support_count, std::size_t n_train, std::size_t n_max);
SvRatios sv_ratios(const MfsvmModel& model, std::size_t n_train, std::size_t n_max);

enum class RiskBucket { ImmediateRisk, ShortTermRisk, LongerTermRisk };

std::string_view to_string(RiskBucket bucket) noexcept;
std::string_view display_name(RiskBucket bucket) noexcept;

/// > 0.60 immediate, [0.40, 0.60] short term, < 0.40 longer term.
RiskBucket bucket_risk(double probability);

struct BucketTally {
  std::size_t immediate = 0;
  std::size_t short_term = 0;
  std::size_t longer_term = 0;

  std::size_t total() const noexcept { return immediate + short_term + longer_term; }
  void add(RiskBucket b) noexcept;
  // Two-column table: the three categories, then the total.
  void write_table(std::ostream& out) const;
};

BucketTally tally_buckets(std::span<const double> probabilities);

}  // namespace hmfsvm
