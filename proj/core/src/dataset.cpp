#include "hmfsvm/dataset.hpp"

#include <string>

#include "hmfsvm/error.hpp"

namespace hmfsvm {

void Dataset::validate() const {
  if (labels.size() != features.size()) {
    throw InputError("dataset has " + std::to_string(features.size()) + " rows but " +
                     std::to_string(labels.size()) + " labels");
  }
  if (!ids.empty() && ids.size() != features.size()) {
    throw InputError("dataset id column length does not match row count");
  }
  const std::size_t d = dim();
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != d) {
      throw InputError("row " + std::to_string(i) + " has dimension " +
                       std::to_string(features[i].size()) + ", expected " + std::to_string(d));
    }
    if (labels[i] != 1 && labels[i] != -1) {
      throw InputError("row " + std::to_string(i) + " has label " + std::to_string(labels[i]) +
                       "; labels must be -1 or +1");
    }
  }
}

LabelCounts count_labels(std::span<const int> labels) {
  LabelCounts counts;
  for (int y : labels) {
    if (y > 0) {
      ++counts.positive;
    } else {
      ++counts.negative;
    }
  }
  return counts;
}

Dataset subset(const Dataset& data, std::span<const std::size_t> indices) {
  Dataset out;
  out.features.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    out.features.push_back(data.features.at(i));
    out.labels.push_back(data.labels.at(i));
    if (!data.ids.empty()) {
      out.ids.push_back(data.ids.at(i));
    }
  }
  return out;
}

void require_both_classes(std::span<const int> labels, const char* what) {
  const LabelCounts c = count_labels(labels);
  if (c.positive == 0 || c.negative == 0) {
    throw TrainingError(std::string(what) + ": both classes must be present (got " +
                        std::to_string(c.positive) + " positive, " +
                        std::to_string(c.negative) + " negative)");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace hmfsvm
