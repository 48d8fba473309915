#include "hmfsvm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "hmfsvm/csv.hpp"
#include "hmfsvm/error.hpp"
#include "hmfsvm/mfsvm.hpp"

namespace hmfsvm {

ConfusionCounts confusion(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw InputError("prediction and truth lengths differ");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pos_pred = predicted[i] > 0;
    if (truth[i] > 0) {
      pos_pred ? ++c.tp : ++c.fn;
    } else {
      pos_pred ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

ClassificationMetrics metrics(const ConfusionCounts& counts) {
  if (counts.total() == 0) throw InputError("metrics need at least one evaluated sample");
  ClassificationMetrics m;
  if (counts.tp + counts.fn > 0) {
    m.sensitivity = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
  }
  if (counts.tn + counts.fp > 0) {
    m.specificity = static_cast<double>(counts.tn) / static_cast<double>(counts.tn + counts.fp);
  }
  m.accuracy = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(counts.total());
  return m;
}

RocCurve roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InputError("score and label lengths differ");
  std::int64_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw InputError("ROC scores must not be NaN");
    labels[i] > 0 ? ++pos : ++neg;
  }
  if (pos == 0 || neg == 0) throw InputError("ROC analysis needs both classes");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::int64_t tp = 0, fp = 0, area2 = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = scores[order[k]];
    std::int64_t dp = 0, dn = 0;
    for (; k < order.size() && scores[order[k]] == s; ++k) {
      labels[order[k]] > 0 ? ++dp : ++dn;
    }
    area2 += dn * (2 * tp + dp);
    tp += dp;
    fp += dn;
    curve.points.push_back(
        {s, static_cast<double>(fp) / static_cast<double>(neg),
         static_cast<double>(tp) / static_cast<double>(pos)});
  }
  curve.auc = static_cast<double>(area2) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
  return curve;
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  write_csv_row(out, {"threshold", "fpr", "tpr"});
  for (const auto& p : curve.points) {
    write_csv_row(out, {std::isinf(p.threshold) ? std::string("inf") : format_decimal(p.threshold),
                        format_decimal(p.fpr), format_decimal(p.tpr)});
  }
}

double chi_square_1df_sf(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(x / 2.0));
}

double exact_binomial_two_sided(std::size_t b, std::size_t c) {
  const std::size_t n = b + c;
  if (n == 0) return 1.0;
  const std::size_t k = std::min(b, c);
  // P(X = i) built up from P(X = 0) = 2^-n in log space to avoid underflow.
  double log_term = -static_cast<double>(n) * std::log(2.0);
  double tail = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    tail += std::exp(log_term);
    log_term += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1));
  }
  return std::min(1.0, 2.0 * tail);
}

McNemarResult mcnemar_from_counts(std::size_t b, std::size_t c, McNemarMethod method) {
  McNemarResult r;
  r.b = b;
  r.c = c;
  const std::size_t n = b + c;
  if (n == 0) {
    r.no_discordance = true;
    r.method = method == McNemarMethod::Auto ? McNemarMethod::Exact : method;
    return r;
  }
  const double diff = std::max(0.0, std::abs(static_cast<double>(b) - static_cast<double>(c)) - 1.0);
  r.statistic = diff * diff / static_cast<double>(n);
  r.p_chi_square = chi_square_1df_sf(r.statistic);
  r.p_exact = exact_binomial_two_sided(b, c);
  if (method == McNemarMethod::Auto) {
    method = n < kMcNemarExactBelow ? McNemarMethod::Exact : McNemarMethod::ChiSquare;
  }
  r.method = method;
  r.p_value = method == McNemarMethod::Exact ? r.p_exact : r.p_chi_square;
  return r;
}

McNemarResult mcnemar(std::span<const int> preds_a, std::span<const int> preds_b,
                      std::span<const int> labels, McNemarMethod method) {
  if (preds_a.size() != labels.size() || preds_b.size() != labels.size()) {
    throw InputError("McNemar inputs must be aligned");
  }
  std::size_t b = 0, c = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool a_right = (preds_a[i] > 0) == (labels[i] > 0);
    const bool b_right = (preds_b[i] > 0) == (labels[i] > 0);
    if (a_right && !b_right) ++b;
    if (!a_right && b_right) ++c;
  }
  return mcnemar_from_counts(b, c, method);
}

SvRatios sv_ratios(std::size_t support_count, std::size_t n_train, std::size_t n_max) {
  if (n_train == 0 || n_max == 0) throw InputError("support-vector ratios need nonzero denominators");
  const double sv = static_cast<double>(support_count);
  const double tr = static_cast<double>(n_train);
  const double mx = static_cast<double>(n_max);
  return {sv / tr, tr / mx, sv / mx};
}

SvRatios sv_ratios(const MfsvmModel& model, std::size_t n_train, std::size_t n_max) {
  return sv_ratios(model.support_count(), n_train, n_max);
}

std::string_view to_string(RiskBucket bucket) noexcept {
  switch (bucket) {
    case RiskBucket::ImmediateRisk:
      return "ImmediateRisk";
    case RiskBucket::ShortTermRisk:
      return "ShortTermRisk";
    case RiskBucket::LongerTermRisk:
      return "LongerTermRisk";
  }
  return "unknown";
}

std::string_view display_name(RiskBucket bucket) noexcept {
  switch (bucket) {
    case RiskBucket::ImmediateRisk:
      return "Immediate Risk";
    case RiskBucket::ShortTermRisk:
      return "Short Term Risk";
    case RiskBucket::LongerTermRisk:
      return "Longer Term Risk";
  }
  return "unknown";
}

RiskBucket bucket_risk(double probability) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw InputError("probability " + std::to_string(probability) + " lies outside [0, 1]");
  }
  if (probability > 0.60) return RiskBucket::ImmediateRisk;
  if (probability >= 0.40) return RiskBucket::ShortTermRisk;
  return RiskBucket::LongerTermRisk;
}

void BucketTally::add(RiskBucket b) noexcept {
  switch (b) {
    case RiskBucket::ImmediateRisk:
      ++immediate;
      break;
    case RiskBucket::ShortTermRisk:
      ++short_term;
      break;
    case RiskBucket::LongerTermRisk:
      ++longer_term;
      break;
  }
}

void BucketTally::write_table(std::ostream& out) const {
  out << "Classification Category,Number of Vehicles\n";
  out << display_name(RiskBucket::ImmediateRisk) << ',' << immediate << '\n';
  out << display_name(RiskBucket::ShortTermRisk) << ',' << short_term << '\n';
  out << display_name(RiskBucket::LongerTermRisk) << ',' << longer_term << '\n';
  out << "Total Number of Vehicles," << total() << '\n';
}

BucketTally tally_buckets(std::span<const double> probabilities) {
  BucketTally t;
  for (double p : probabilities) t.add(bucket_risk(p));
  return t;
}

}  // namespace hmfsvm
