#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hmfsvm {

using Vector = std::vector<double>;

// Binary labelled samples. Labels are -1 or +1; ids are optional and, when
// present, have one entry per sample.
struct Dataset {
  std::vector<Vector> features;
  std::vector<int> labels;
  std::vector<std::string> ids;

  std::size_t size() const noexcept { return features.size(); }
  std::size_t dim() const noexcept { return features.empty() ? 0 : features.front().size(); }
  bool empty() const noexcept { return features.empty(); }

  // Throws InputError if the rows are ragged, labels are not +-1, or the
  // id column has the wrong length.
  void validate() const;
};

struct LabelCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

LabelCounts count_labels(std::span<const int> labels);

// Rows selected by index, in the order given.
Dataset subset(const Dataset& data, std::span<const std::size_t> indices);

// Throws TrainingError unless both classes are present.
void require_both_classes(std::span<const int> labels, const char* what);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace hmfsvm
