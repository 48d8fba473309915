#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmfsvm/dataset.hpp"
#include "hmfsvm/mfsvm.hpp"
#include "hmfsvm/quantizer.hpp"
#include "hmfsvm/scaling.hpp"

namespace hmfsvm {

// ---------------------------------------------------------------------------
// Temporal preprocessing

struct ShiftRegisterOutput {
  std::vector<Vector> taps;            // one tap vector per time t >= l - 1
  std::optional<std::string> warning;  // set when the series is shorter than l
};

/// Slides a register of length l over `series`. At every time t >= l - 1 it
/// emits the l/k values at t - (l - k), ..., t - k, t (oldest first, most
/// recent last). Throws ConfigError unless l, k >= 1 and l % k == 0.
ShiftRegisterOutput shift_register(std::span<const double> series, std::size_t l, std::size_t k);

/// Tap vector at the final time step. Series shorter than l are front-padded
/// with their first value. Throws InputError on an empty series.
Vector latest_taps(std::span<const double> series, std::size_t l, std::size_t k);

/// One time series per feature for every sample.
struct SequenceDataset {
  std::vector<std::vector<Vector>> series;  // [sample][feature] -> values over time
  std::vector<int> labels;
  std::vector<std::string> ids;

  std::size_t size() const noexcept { return series.size(); }
  std::size_t feature_count() const noexcept { return series.empty() ? 0 : series.front().size(); }
  void validate() const;
};

// Wraps each static feature as a length-1 series.
SequenceDataset sequences_from_static(const Dataset& data);
std::vector<Vector> static_sample(std::span<const double> row);

// ---------------------------------------------------------------------------
// Model

inline constexpr std::size_t kLayerCount = 6;

struct HierarchyConfig {
  std::size_t register_length = 1;
  std::size_t tap_interval = 1;
  // Quantizer sizes on the layer 1->2, 2->3, 3->4 and 4->5 boundaries. Each
  // output channel of the lower layer gets its own codebook of this size.
  std::array<std::size_t, 4> codebook_sizes{8, 16, 16, 16};
  // Number of layer-5 units (best matching units) partitioning the data.
  std::size_t bmu_count = 16;
  // Committee widths of layers 2..5.
  std::array<std::size_t, 4> committee_widths{2, 3, 3, 3};
  // Stratified fraction of the training set each committee member sees when
  // a layer has more than one member.
  double subsample_fraction = 0.8;
  double impurity_threshold = 0.1;
  std::size_t min_unit_examples = 20;
  // MFSVM settings per layer; index 5 configures the specialists.
  std::array<MfsvmConfig, kLayerCount> layers{};
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  void validate() const;
  // Same kernel, C and membership rule on every layer.
  static HierarchyConfig uniform(const MfsvmConfig& layer);
};

// Specialist spawn rule: error strictly above the threshold and at least
// min_unit_examples samples in the unit.
bool should_spawn_specialist(double unit_error, std::size_t unit_count,
                             const HierarchyConfig& config) noexcept;

struct BmuUnit {
  std::vector<std::size_t> members;  // training indices routed to this unit
  std::size_t positives = 0;
  std::optional<MfsvmModel> specialist;
  bool specialist_failed = false;  // spawn rule held but the cell could not be trained

  std::size_t count() const noexcept { return members.size(); }
  // Majority-vote misclassification rate, min(pos, neg) / n; 0 when empty.
  double error() const noexcept;
  // Laplace-smoothed positive fraction (pos + 1) / (n + 2).
  double probability() const noexcept;
};

struct LayerBlock {
  std::vector<Codebook> quantizers;  // one scalar codebook per previous-layer output
  Standardizer input_scaler;         // applied to the quantized outputs
  std::vector<MfsvmModel> members;
};

struct RouteResult {
  double probability = 0.5;
  std::size_t unit = 0;
  bool from_specialist = false;
};

struct HierarchyModel {
  static constexpr const char* kSchema = "hmfsvm-hierarchy";
  static constexpr int kVersion = 1;

  std::size_t register_length = 1;
  std::size_t tap_interval = 1;
  double impurity_threshold = 0.1;
  std::size_t min_unit_examples = 20;

  std::vector<Standardizer> feature_scalers;  // one per feature, over its taps
  std::vector<MfsvmModel> first_layer;        // one per feature
  std::array<LayerBlock, 4> committees;       // layers 2..5
  Codebook bmu_map;
  std::vector<BmuUnit> units;
  std::size_t n_train = 0;

  std::size_t feature_count() const noexcept { return first_layer.size(); }
  std::size_t specialist_count() const noexcept;

  // Positive-class probability for one sample.
  double predict(const std::vector<Vector>& sample_series) const;
  RouteResult route(const std::vector<Vector>& sample_series) const;
  // Layer-5 output vector fed to the BMU map.
  Vector top_layer_output(const std::vector<Vector>& sample_series) const;

  void write(TokenWriter& out) const;
  static HierarchyModel read(TokenReader& in);
  std::string to_string() const;
  static HierarchyModel from_string(const std::string& text);
};

HierarchyModel train_hierarchy(const SequenceDataset& data, const HierarchyConfig& config);

double predict_hierarchy(const HierarchyModel& model, const std::vector<Vector>& sample_series);

// ---------------------------------------------------------------------------
// Diagnostics

struct SimilarityGapReport {
  std::vector<double> gaps;  // one per sample
  double gamma_hat = 0.0;    // minimum gap
};

/// For each sample: mean similarity to the other members of its class minus
/// the largest mean similarity to any other class. A singleton class uses the
/// sample's self-similarity. Reported only; nothing is asserted.
SimilarityGapReport similarity_gap_diagnostic(
    const Dataset& data,
    const std::function<double(std::span<const double>, std::span<const double>)>& similarity);

}  // namespace hmfsvm
