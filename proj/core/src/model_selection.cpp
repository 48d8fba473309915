#include "hmfsvm/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "hmfsvm/csv.hpp"
#include "hmfsvm/error.hpp"
#include "hmfsvm/mfsvm.hpp"
#include "hmfsvm/parallel.hpp"
#include "hmfsvm/text_io.hpp"

namespace hmfsvm {

std::vector<std::vector<std::size_t>> nu_fold_split(std::span<const int> labels, std::size_t nu,
                                                    std::uint64_t seed) {
  if (nu < 2) throw ConfigError("cross-validation needs at least two folds");
  if (labels.size() < nu) {
    throw ConfigError("cannot split " + std::to_string(labels.size()) + " samples into " +
                      std::to_string(nu) + " folds");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order;
  for (int cls : {1, -1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    order.insert(order.end(), members.begin(), members.end());
  }
  std::vector<std::vector<std::size_t>> folds(nu);
  for (std::size_t k = 0; k < order.size(); ++k) folds[k % nu].push_back(order[k]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvResult cross_validate(const Dataset& data, double C, double gamma, const CvSettings& settings) {
  data.validate();
  const auto folds = nu_fold_split(data.labels, settings.nu, settings.seed);
  CvResult result;
  result.predictions.assign(data.size(), 0);
  result.times_predicted.assign(data.size(), 0);

  std::vector<std::size_t> fold_of(data.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (std::size_t i : folds[f]) fold_of[i] = f;
  }

  std::size_t correct = 0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] != f) train_idx.push_back(i);
    }
    const Dataset train_set = subset(data, train_idx);
    MfsvmConfig config;
    config.kernel = {settings.family, gamma, settings.coef0};
    config.C = C;
    config.membership = settings.membership;
    config.costs = settings.costs ? *settings.costs : inverse_frequency_costs(train_set.labels);
    config.tol = settings.tol;
    config.max_iterations = settings.max_iterations;
    config.calibrate = false;
    const MfsvmModel model = train(train_set, config);
    for (std::size_t i : folds[f]) {
      const int y = model.predict_label(data.features[i]);
      result.predictions[i] = y;
      ++result.times_predicted[i];
      if (y == data.labels[i]) ++correct;
    }
  }
  result.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  return result;
}

double cv_accuracy(const Dataset& data, double C, double gamma, const CvSettings& settings) {
  return cross_validate(data, C, gamma, settings).accuracy;
}

void GridSpec::validate() const {
  if (c_exponents.empty() || gamma_exponents.empty()) {
    throw ConfigError("grid exponent lists must be nonempty");
  }
  if (!(fine_step > 0.0)) throw ConfigError("fine_step must be positive");
  if (!(fine_radius >= 0.0)) throw ConfigError("fine_radius must be nonnegative");
}

GridSpec GridSpec::paper_default() {
  GridSpec g;
  for (int e = -5; e <= 17; e += 2) g.c_exponents.push_back(e);
  for (int e = -18; e <= 4; ++e) g.gamma_exponents.push_back(e);
  return g;
}

GridCell pick_best(const std::vector<GridCell>& cells) {
  if (cells.empty()) throw InputError("no grid cells to choose from");
  GridCell best = cells.front();
  for (const auto& c : cells) {
    const bool better =
        c.cv_accuracy > best.cv_accuracy ||
        (c.cv_accuracy == best.cv_accuracy &&
         (c.c_exp < best.c_exp || (c.c_exp == best.c_exp && c.gamma_exp < best.gamma_exp)));
    if (better) best = c;
  }
  return best;
}

namespace {

void evaluate_cells(const Dataset& data, std::vector<GridCell>& cells, const CvSettings& settings,
                    const GridSearchOptions& options) {
  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  if (options.shuffle_order) {
    std::mt19937_64 rng(*options.shuffle_order);
    std::shuffle(order.begin(), order.end(), rng);
  }
  parallel_for(order.size(), options.jobs, [&](std::size_t k) {
    GridCell& cell = cells[order[k]];
    cell.cv_accuracy =
        cv_accuracy(data, std::exp2(cell.c_exp), std::exp2(cell.gamma_exp), settings);
  });
}

std::vector<double> fine_axis(double centre, double radius, double step) {
  const auto half = static_cast<long>(std::floor(radius / step + 1e-9));
  std::vector<double> axis;
  for (long k = -half; k <= half; ++k) axis.push_back(centre + static_cast<double>(k) * step);
  return axis;
}

}  // namespace

GridSearchReport grid_search(const Dataset& data, const GridSpec& spec, const CvSettings& settings,
                             const GridSearchOptions& options) {
  spec.validate();
  GridSearchReport report;
  for (double c : spec.c_exponents) {
    for (double g : spec.gamma_exponents) report.coarse.push_back({c, g, 0.0});
  }
  evaluate_cells(data, report.coarse, settings, options);
  report.best_coarse = pick_best(report.coarse);

  for (double c : fine_axis(report.best_coarse.c_exp, spec.fine_radius, spec.fine_step)) {
    for (double g : fine_axis(report.best_coarse.gamma_exp, spec.fine_radius, spec.fine_step)) {
      report.fine.push_back({c, g, 0.0});
    }
  }
  evaluate_cells(data, report.fine, settings, options);
  report.best_fine = pick_best(report.fine);
  return report;
}

void GridSearchReport::write_csv(std::ostream& out) const {
  write_csv_row(out, {"pass", "c_exp", "gamma_exp", "cv_accuracy"});
  for (const auto& [name, cells] : {std::pair{"coarse", &coarse}, std::pair{"fine", &fine}}) {
    for (const auto& c : *cells) {
      write_csv_row(out, {name, format_decimal(c.c_exp), format_decimal(c.gamma_exp),
                          format_decimal(c.cv_accuracy)});
    }
  }
}

GridSearchReport GridSearchReport::read_csv(std::istream& in) {
  const CsvTable table = hmfsvm::read_csv(in);
  const std::size_t pass = table.column("pass"), c_col = table.column("c_exp"),
                    g_col = table.column("gamma_exp"), acc = table.column("cv_accuracy");
  if (pass == CsvTable::npos || c_col == CsvTable::npos || g_col == CsvTable::npos ||
      acc == CsvTable::npos) {
    throw InputError("grid report needs columns pass, c_exp, gamma_exp, cv_accuracy");
  }
  GridSearchReport report;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "grid report line " + std::to_string(table.line_numbers[r]);
    if (row.size() != table.header.size()) throw InputError(where + ": wrong field count");
    GridCell cell;
    try {
      cell = {parse_real(row[c_col]), parse_real(row[g_col]), parse_real(row[acc])};
    } catch (const InputError&) {
      throw InputError(where + ": not a number");
    }
    if (row[pass] == "coarse") {
      report.coarse.push_back(cell);
    } else if (row[pass] == "fine") {
      report.fine.push_back(cell);
    } else {
      throw InputError(where + ": unknown pass '" + row[pass] + "'");
    }
  }
  if (report.coarse.empty() || report.fine.empty()) {
    throw InputError("grid report needs both coarse and fine cells");
  }
  report.best_coarse = pick_best(report.coarse);
  report.best_fine = pick_best(report.fine);
  return report;
}

Dataset undersample_majority(const Dataset& data, std::uint64_t seed) {
  data.validate();
  require_both_classes(data.labels, "undersampling");
  const LabelCounts c = count_labels(data.labels);
  if (c.positive == c.negative) return data;
  const int majority = c.positive > c.negative ? 1 : -1;
  const std::size_t keep = std::min(c.positive, c.negative);

  std::vector<std::size_t> majority_idx;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] == majority) majority_idx.push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(majority_idx.begin(), majority_idx.end(), rng);
  majority_idx.resize(keep);

  std::vector<bool> retained(data.size(), false);
  for (std::size_t i : majority_idx) retained[i] = true;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] != majority || retained[i]) rows.push_back(i);
  }
  return subset(data, rows);
}

}  // namespace hmfsvm
