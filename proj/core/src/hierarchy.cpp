#include "hmfsvm/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hmfsvm/error.hpp"
#include "hmfsvm/parallel.hpp"
#include "hmfsvm/text_io.hpp"

namespace hmfsvm {
namespace {

void check_register(std::size_t l, std::size_t k) {
  if (l == 0 || k == 0) throw ConfigError("shift register length and tap interval must be >= 1");
  if (l % k != 0) {
    throw ConfigError("shift register length " + std::to_string(l) +
                      " is not a multiple of tap interval " + std::to_string(k));
  }
}

// Stratified sample of round(fraction * class size) indices per class, at
// least two per class, returned in ascending order.
std::vector<std::size_t> stratified_subsample(std::span<const int> labels, double fraction,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> picked;
  for (int cls : {1, -1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto want = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(members.size())));
    const std::size_t take = std::min(members.size(), std::max<std::size_t>(2, want));
    picked.insert(picked.end(), members.begin(), members.begin() + static_cast<long>(take));
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

Vector quantized(const LayerBlock& block, std::span<const double> previous) {
  if (previous.size() != block.quantizers.size()) throw InputError("layer input width mismatch");
  Vector q(previous.size());
  for (std::size_t c = 0; c < previous.size(); ++c) {
    const Codebook& book = block.quantizers[c];
    q[c] = book.prototypes[book.nearest(previous.subspan(c, 1))][0];
  }
  return q;
}

Vector committee_input(const LayerBlock& block, std::span<const double> previous) {
  return block.input_scaler.transform(quantized(block, previous));
}

Vector committee_output(const LayerBlock& block, const Vector& input) {
  Vector out(block.members.size());
  for (std::size_t j = 0; j < block.members.size(); ++j) {
    out[j] = block.members[j].decision_value(input);
  }
  return out;
}

// Per-feature tap vectors, standardised with the model's feature scalers.
std::vector<Vector> scaled_taps(const HierarchyModel& model,
                                const std::vector<Vector>& sample_series) {
  if (sample_series.size() != model.feature_count()) {
    throw InputError("sample has " + std::to_string(sample_series.size()) +
                     " features, model expects " + std::to_string(model.feature_count()));
  }
  std::vector<Vector> taps(sample_series.size());
  for (std::size_t f = 0; f < sample_series.size(); ++f) {
    taps[f] = model.feature_scalers[f].transform(
        latest_taps(sample_series[f], model.register_length, model.tap_interval));
  }
  return taps;
}

Vector concat(const std::vector<Vector>& parts) {
  Vector out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void write_optional_model(TokenWriter& out, const std::optional<MfsvmModel>& m) {
  out.word("specialist").integer(m ? 1 : 0).newline();
  if (m) m->write(out);
}

}  // namespace

// ---------------------------------------------------------------------------

ShiftRegisterOutput shift_register(std::span<const double> series, std::size_t l, std::size_t k) {
  check_register(l, k);
  ShiftRegisterOutput out;
  if (series.size() < l) {
    out.warning = "series of length " + std::to_string(series.size()) +
                  " is shorter than the register length " + std::to_string(l);
    return out;
  }
  for (std::size_t t = l - 1; t < series.size(); ++t) {
    Vector taps;
    taps.reserve(l / k);
    for (std::size_t back = l - k + 1; back-- > 0;) {
      if (back % k == 0) taps.push_back(series[t - back]);
    }
    out.taps.push_back(std::move(taps));
  }
  return out;
}

Vector latest_taps(std::span<const double> series, std::size_t l, std::size_t k) {
  check_register(l, k);
  if (series.empty()) throw InputError("cannot take taps from an empty series");
  Vector window(l);
  const std::size_t pad = l > series.size() ? l - series.size() : 0;
  for (std::size_t p = 0; p < l; ++p) {
    window[p] = p < pad ? series.front() : series[series.size() - l + p];
  }
  return shift_register(window, l, k).taps.back();
}

void SequenceDataset::validate() const {
  if (labels.size() != series.size()) throw InputError("sequence dataset label count mismatch");
  if (!ids.empty() && ids.size() != series.size()) throw InputError("sequence dataset id count mismatch");
  const std::size_t f = feature_count();
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].size() != f) throw InputError("sample " + std::to_string(i) + " has a different feature count");
    for (const auto& s : series[i]) {
      if (s.empty()) throw InputError("sample " + std::to_string(i) + " has an empty series");
    }
    if (labels[i] != 1 && labels[i] != -1) throw InputError("labels must be -1 or +1");
  }
}

std::vector<Vector> static_sample(std::span<const double> row) {
  std::vector<Vector> s;
  s.reserve(row.size());
  for (double v : row) s.push_back(Vector{v});
  return s;
}

SequenceDataset sequences_from_static(const Dataset& data) {
  data.validate();
  SequenceDataset out;
  out.labels = data.labels;
  out.ids = data.ids;
  for (const auto& row : data.features) out.series.push_back(static_sample(row));
  return out;
}

// ---------------------------------------------------------------------------

void HierarchyConfig::validate() const {
  check_register(register_length, tap_interval);
  for (std::size_t m : codebook_sizes) {
    if (m == 0) throw ConfigError("codebook sizes must be >= 1");
  }
  if (bmu_count == 0) throw ConfigError("bmu_count must be >= 1");
  for (std::size_t w : committee_widths) {
    if (w == 0) throw ConfigError("committee widths must be >= 1");
  }
  if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0)) {
    throw ConfigError("subsample_fraction must lie in (0, 1]");
  }
  if (!(impurity_threshold > 0.0 && impurity_threshold < 1.0)) {
    throw ConfigError("impurity threshold must lie in (0, 1)");
  }
  if (min_unit_examples == 0) throw ConfigError("min_unit_examples must be >= 1");
  for (const auto& layer : layers) {
    layer.kernel.validate();
    layer.membership.validate();
    layer.costs.validate();
    if (!(layer.C > 0.0)) throw ConfigError("layer C must be positive");
  }
}

HierarchyConfig HierarchyConfig::uniform(const MfsvmConfig& layer) {
  HierarchyConfig c;
  c.layers.fill(layer);
  return c;
}

bool should_spawn_specialist(double unit_error, std::size_t unit_count,
                             const HierarchyConfig& config) noexcept {
  return unit_error > config.impurity_threshold && unit_count >= config.min_unit_examples;
}

double BmuUnit::error() const noexcept {
  if (members.empty()) return 0.0;
  const std::size_t neg = members.size() - positives;
  return static_cast<double>(std::min(positives, neg)) / static_cast<double>(members.size());
}

double BmuUnit::probability() const noexcept {
  return (static_cast<double>(positives) + 1.0) / (static_cast<double>(members.size()) + 2.0);
}

std::size_t HierarchyModel::specialist_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(units.begin(), units.end(), [](const BmuUnit& u) { return u.specialist.has_value(); }));
}

Vector HierarchyModel::top_layer_output(const std::vector<Vector>& sample_series) const {
  const std::vector<Vector> taps = scaled_taps(*this, sample_series);
  Vector z(first_layer.size());
  for (std::size_t f = 0; f < first_layer.size(); ++f) z[f] = first_layer[f].decision_value(taps[f]);
  for (const auto& block : committees) z = committee_output(block, committee_input(block, z));
  return z;
}

RouteResult HierarchyModel::route(const std::vector<Vector>& sample_series) const {
  const std::vector<Vector> taps = scaled_taps(*this, sample_series);
  Vector z(first_layer.size());
  for (std::size_t f = 0; f < first_layer.size(); ++f) z[f] = first_layer[f].decision_value(taps[f]);
  for (const auto& block : committees) z = committee_output(block, committee_input(block, z));

  std::size_t u = bmu_map.nearest(z);
  if (units[u].count() == 0) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < units.size(); ++v) {
      if (units[v].count() == 0) continue;
      const double d = squared_distance(z, bmu_map.prototypes[v]);
      if (d < best) {
        best = d;
        u = v;
      }
    }
  }
  RouteResult r;
  r.unit = u;
  if (units[u].specialist) {
    r.probability = units[u].specialist->predict_prob(concat(taps));
    r.from_specialist = true;
  } else {
    r.probability = units[u].probability();
  }
  return r;
}

double HierarchyModel::predict(const std::vector<Vector>& sample_series) const {
  return route(sample_series).probability;
}

double predict_hierarchy(const HierarchyModel& model, const std::vector<Vector>& sample_series) {
  return model.predict(sample_series);
}

HierarchyModel train_hierarchy(const SequenceDataset& data, const HierarchyConfig& config) {
  config.validate();
  data.validate();
  require_both_classes(data.labels, "hierarchy training");
  const std::size_t n = data.size();
  const std::size_t features = data.feature_count();
  if (features == 0) throw InputError("hierarchy training needs at least one feature");

  HierarchyModel model;
  model.register_length = config.register_length;
  model.tap_interval = config.tap_interval;
  model.impurity_threshold = config.impurity_threshold;
  model.min_unit_examples = config.min_unit_examples;
  model.n_train = n;

  // Layer 1: one MFSVM per feature on its standardised taps.
  std::vector<std::vector<Vector>> taps(features, std::vector<Vector>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < features; ++f) {
      taps[f][i] = latest_taps(data.series[i][f], config.register_length, config.tap_interval);
    }
  }
  model.feature_scalers.resize(features);
  model.first_layer.resize(features);
  for (std::size_t f = 0; f < features; ++f) {
    model.feature_scalers[f] = Standardizer::fit(taps[f]);
    taps[f] = model.feature_scalers[f].transform(taps[f]);
  }
  // Only the specialists report probabilities; inner layers pass decision
  // values on, so they skip calibration.
  auto inner = [&](std::size_t layer) {
    MfsvmConfig c = config.layers[layer];
    c.calibrate = false;
    return c;
  };
  parallel_for(features, config.jobs, [&](std::size_t f) {
    Dataset d;
    d.features = taps[f];
    d.labels = data.labels;
    model.first_layer[f] = train(d, inner(0));
  });

  std::vector<Vector> outputs(n, Vector(features));
  std::vector<Vector> originals(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vector> parts(features);
    for (std::size_t f = 0; f < features; ++f) {
      outputs[i][f] = model.first_layer[f].decision_value(taps[f][i]);
      parts[f] = taps[f][i];
    }
    originals[i] = concat(parts);
  }

  // Layers 2..5: quantise every output channel of the previous layer with
  // its own scalar codebook and train a committee on the quantised values.
  for (std::size_t layer = 0; layer < model.committees.size(); ++layer) {
    LayerBlock& block = model.committees[layer];
    const std::size_t channels = outputs.front().size();
    block.quantizers.resize(channels);
    for (std::size_t c = 0; c < channels; ++c) {
      std::vector<Vector> column(n);
      for (std::size_t i = 0; i < n; ++i) column[i] = Vector{outputs[i][c]};
      const std::size_t m = std::min(config.codebook_sizes[layer], count_distinct(column));
      block.quantizers[c] = quantize(column, m, mix_seed(config.seed, 1000 * (layer + 1) + c));
    }
    std::vector<Vector> encoded(n);
    for (std::size_t i = 0; i < n; ++i) encoded[i] = quantized(block, outputs[i]);
    block.input_scaler = Standardizer::fit(encoded);
    encoded = block.input_scaler.transform(encoded);

    const std::size_t width = config.committee_widths[layer];
    const MfsvmConfig layer_config = inner(layer + 1);
    block.members.resize(width);
    parallel_for(width, config.jobs, [&](std::size_t j) {
      Dataset d;
      if (width == 1) {
        d.features = encoded;
        d.labels = data.labels;
      } else {
        const auto pick = stratified_subsample(data.labels, config.subsample_fraction,
                                               mix_seed(config.seed, 100 * (layer + 1) + j));
        for (std::size_t i : pick) {
          d.features.push_back(encoded[i]);
          d.labels.push_back(data.labels[i]);
        }
      }
      block.members[j] = train(d, layer_config);
    });
    for (std::size_t i = 0; i < n; ++i) outputs[i] = committee_output(block, encoded[i]);
  }

  // Layer-5 units act as best matching units partitioning the training set.
  const std::size_t units = std::min(config.bmu_count, count_distinct(outputs));
  model.bmu_map = quantize(outputs, units, mix_seed(config.seed, 50));
  model.units.resize(model.bmu_map.size());
  for (std::size_t i = 0; i < n; ++i) {
    BmuUnit& u = model.units[model.bmu_map.nearest(outputs[i])];
    u.members.push_back(i);
    if (data.labels[i] > 0) ++u.positives;
  }

  // Layer 6: specialists on the original inputs of impure, populous units.
  std::vector<std::size_t> spawn;
  for (std::size_t u = 0; u < model.units.size(); ++u) {
    if (should_spawn_specialist(model.units[u].error(), model.units[u].count(), config)) {
      spawn.push_back(u);
    }
  }
  parallel_for(spawn.size(), config.jobs, [&](std::size_t s) {
    BmuUnit& unit = model.units[spawn[s]];
    Dataset d;
    for (std::size_t i : unit.members) {
      d.features.push_back(originals[i]);
      d.labels.push_back(data.labels[i]);
    }
    try {
      unit.specialist = train(d, config.layers[5]);
    } catch (const TrainingError&) {
      unit.specialist_failed = true;
    }
  });
  return model;
}

// ---------------------------------------------------------------------------

void HierarchyModel::write(TokenWriter& out) const {
  out.word(kSchema).integer(kVersion).newline();
  out.word("register").integer(static_cast<std::int64_t>(register_length))
      .integer(static_cast<std::int64_t>(tap_interval)).newline();
  out.word("spawn").real(impurity_threshold).integer(static_cast<std::int64_t>(min_unit_examples))
      .newline();
  out.word("n_train").integer(static_cast<std::int64_t>(n_train)).newline();
  out.word("layer1").integer(static_cast<std::int64_t>(first_layer.size())).newline();
  for (std::size_t f = 0; f < first_layer.size(); ++f) {
    feature_scalers[f].write(out);
    first_layer[f].write(out);
  }
  for (std::size_t l = 0; l < committees.size(); ++l) {
    const LayerBlock& block = committees[l];
    out.word("layer").integer(static_cast<std::int64_t>(l + 2))
        .integer(static_cast<std::int64_t>(block.members.size())).newline();
    out.word("quantizers").integer(static_cast<std::int64_t>(block.quantizers.size())).newline();
    for (const auto& q : block.quantizers) q.write(out);
    block.input_scaler.write(out);
    for (const auto& m : block.members) m.write(out);
  }
  out.word("bmu").newline();
  bmu_map.write(out);
  out.word("units").integer(static_cast<std::int64_t>(units.size())).newline();
  for (const auto& u : units) {
    out.word("unit").integer(static_cast<std::int64_t>(u.positives))
        .integer(u.specialist_failed ? 1 : 0).integer(static_cast<std::int64_t>(u.members.size()));
    for (std::size_t i : u.members) out.integer(static_cast<std::int64_t>(i));
    out.newline();
    write_optional_model(out, u.specialist);
  }
  out.word("end").newline();
}

HierarchyModel HierarchyModel::read(TokenReader& in) {
  HierarchyModel m;
  in.expect_header(kSchema, kVersion);
  in.expect("register");
  m.register_length = in.count();
  m.tap_interval = in.count();
  check_register(m.register_length, m.tap_interval);
  in.expect("spawn");
  m.impurity_threshold = in.real();
  m.min_unit_examples = in.count();
  in.expect("n_train");
  m.n_train = in.count();
  in.expect("layer1");
  const std::size_t features = in.count();
  for (std::size_t f = 0; f < features; ++f) {
    m.feature_scalers.push_back(Standardizer::read(in));
    m.first_layer.push_back(MfsvmModel::read(in));
  }
  for (std::size_t l = 0; l < m.committees.size(); ++l) {
    in.expect("layer");
    if (in.count() != l + 2) throw InputError("hierarchy layers out of order");
    const std::size_t width = in.count();
    LayerBlock& block = m.committees[l];
    in.expect("quantizers");
    const std::size_t channels = in.count();
    for (std::size_t c = 0; c < channels; ++c) block.quantizers.push_back(Codebook::read(in));
    block.input_scaler = Standardizer::read(in);
    for (std::size_t j = 0; j < width; ++j) block.members.push_back(MfsvmModel::read(in));
  }
  in.expect("bmu");
  m.bmu_map = Codebook::read(in);
  in.expect("units");
  const std::size_t count = in.count();
  if (count != m.bmu_map.size()) throw InputError("unit count does not match the BMU map");
  m.units.resize(count);
  for (auto& u : m.units) {
    in.expect("unit");
    u.positives = in.count();
    u.specialist_failed = in.integer() != 0;
    const std::size_t members = in.count();
    for (std::size_t i = 0; i < members; ++i) u.members.push_back(in.count());
    in.expect("specialist");
    if (in.integer() != 0) u.specialist = MfsvmModel::read(in);
  }
  in.expect("end");
  return m;
}

std::string HierarchyModel::to_string() const {
  std::ostringstream os;
  TokenWriter w(os);
  write(w);
  return os.str();
}

HierarchyModel HierarchyModel::from_string(const std::string& text) {
  std::istringstream is(text);
  TokenReader r(is);
  return read(r);
}

// ---------------------------------------------------------------------------

SimilarityGapReport similarity_gap_diagnostic(
    const Dataset& data,
    const std::function<double(std::span<const double>, std::span<const double>)>& similarity) {
  data.validate();
  require_both_classes(data.labels, "similarity gap diagnostic");
  const std::size_t n = data.size();
  SimilarityGapReport report;
  report.gaps.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double within = 0.0, between = 0.0;
    std::size_t n_within = 0, n_between = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double s = similarity(data.features[i], data.features[j]);
      if (data.labels[j] == data.labels[i]) {
        within += s;
        ++n_within;
      } else {
        between += s;
        ++n_between;
      }
    }
    if (n_within == 0) {
      within = similarity(data.features[i], data.features[i]);
      n_within = 1;
    }
    report.gaps[i] = within / static_cast<double>(n_within) - between / static_cast<double>(n_between);
  }
  report.gamma_hat = *std::min_element(report.gaps.begin(), report.gaps.end());
  return report;
}

}  // namespace hmfsvm
