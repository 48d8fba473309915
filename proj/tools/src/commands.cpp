#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "hmfsvm/csv.hpp"
#include "hmfsvm/dataprep.hpp"
#include "hmfsvm/error.hpp"
#include "hmfsvm/evaluation.hpp"
#include "hmfsvm/model_selection.hpp"
#include "hmfsvm/synthetic.hpp"
#include "hmfsvm/text_io.hpp"
#include "model_file.hpp"
#include "output_set.hpp"

namespace hmfsvm::cli {
namespace {

Date require_date(const std::string& text, const char* flag) {
  const auto d = parse_date(text);
  if (!d) throw ConfigError(std::string(flag) + ": invalid date '" + text + "'");
  return *d;
}

SchemaConfig schema_from(const std::vector<std::string>& overrides) {
  SchemaConfig schema;
  const std::pair<const char*, std::string SchemaConfig::*> fields[] = {
      {"vehicle_id", &SchemaConfig::vehicle_id},
      {"registration_date", &SchemaConfig::registration_date},
      {"job_date", &SchemaConfig::job_date},
      {"odometer", &SchemaConfig::odometer},
      {"work_area", &SchemaConfig::work_area},
      {"labor_hours", &SchemaConfig::labor_hours},
      {"parts_cost", &SchemaConfig::parts_cost},
      {"labor_cost", &SchemaConfig::labor_cost},
      {"breakdown", &SchemaConfig::breakdown},
      {"tasks_in_job", &SchemaConfig::tasks_in_job},
  };
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw ConfigError("--column expects field=name, got '" + item + "'");
    }
    const std::string field = item.substr(0, eq);
    const auto it = std::find_if(std::begin(fields), std::end(fields),
                                 [&](const auto& f) { return field == f.first; });
    if (it == std::end(fields)) throw ConfigError("--column: unknown field '" + field + "'");
    schema.*(it->second) = item.substr(eq + 1);
  }
  return schema;
}

std::string opt_rate(const std::optional<double>& v) {
  return v ? format_decimal(*v) : std::string("undefined");
}

struct Predictions {
  std::vector<std::string> ids;
  std::vector<double> probabilities;
};

Predictions read_predictions(const fs::path& path) {
  const CsvTable t = read_csv_file(path);
  const std::size_t id_col = t.column("vehicle_id");
  const std::size_t p_col = t.column("probability");
  if (id_col == CsvTable::npos || p_col == CsvTable::npos) {
    throw InputError("'" + path.string() + "' needs vehicle_id and probability columns");
  }
  Predictions p;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = path.string() + " line " + std::to_string(t.line_numbers[r]);
    if (row.size() != t.header.size()) throw InputError(where + ": wrong field count");
    double prob = 0.0;
    try {
      prob = parse_real(trim(row[p_col]));
    } catch (const InputError&) {
      throw InputError(where + ": malformed probability '" + row[p_col] + "'");
    }
    if (!(prob >= 0.0 && prob <= 1.0)) throw InputError(where + ": probability outside [0, 1]");
    if (!seen.emplace(row[id_col], r).second) {
      throw InputError(where + ": duplicate vehicle '" + row[id_col] + "'");
    }
    p.ids.push_back(row[id_col]);
    p.probabilities.push_back(prob);
  }
  if (p.ids.empty()) throw InputError("'" + path.string() + "' holds no predictions");
  return p;
}

std::vector<int> threshold_labels(const std::vector<double>& probs, double threshold) {
  std::vector<int> out;
  out.reserve(probs.size());
  for (double p : probs) out.push_back(p >= threshold ? 1 : -1);
  return out;
}

std::string_view method_name(McNemarMethod m) {
  switch (m) {
    case McNemarMethod::ChiSquare:
      return "chi_square";
    case McNemarMethod::Exact:
      return "exact";
    case McNemarMethod::Auto:
      break;
  }
  return "auto";
}

}  // namespace

std::vector<double> parse_exponent_range(const std::string& text) {
  double parts[3];
  std::size_t start = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t end = k < 2 ? text.find(':', start) : text.size();
    if (end == std::string::npos) throw ConfigError("range '" + text + "' is not start:stop:step");
    const char* first = text.data() + start;
    const char* last = text.data() + end;
    const auto [ptr, ec] = std::from_chars(first, last, parts[k]);
    if (ec != std::errc() || ptr != last || !std::isfinite(parts[k])) {
      throw ConfigError("range '" + text + "' is not start:stop:step");
    }
    start = end + 1;
  }
  const auto [lo, hi, step] = parts;
  if (!(step > 0.0) || hi < lo) throw ConfigError("range '" + text + "' needs stop >= start and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (n > 10000) throw ConfigError("range '" + text + "' has too many values");
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i) values.push_back(lo + static_cast<double>(i) * step);
  return values;
}

void cmd_prepare(const PrepareOptions& o, std::ostream& log) {
  const Date as_of = require_date(o.as_of, "--as-of");
  const SchemaConfig schema = schema_from(o.columns);

  const ParsedJobs parsed = parse_fleet_csv(o.input, schema);
  const CleanedJobs cleaned = clean(parsed.records);
  const DerivedVehicles derived = derive_features(cleaned.records, as_of);
  const FilteredVehicles filtered = apply_filters(derived.rows);
  FeatureTable table = to_feature_table(filtered.rows);

  std::ostringstream stages;
  parsed.log.write(stages);
  cleaned.log.write(stages);
  derived.log.write(stages);
  filtered.log.write(stages);
  if (o.balance) {
    const Dataset balanced = undersample_majority(table.to_dataset(), o.seed);
    stages << "stage balance: input " << table.size() << ", retained " << balanced.size()
           << ", removed " << table.size() - balanced.size() << '\n';
    table.ids = balanced.ids;
    table.features = balanced.features;
    table.labels = balanced.labels;
  }

  std::ostringstream csv;
  write_feature_csv(csv, table);
  OutputSet out;
  out.add(o.output, csv.str());
  fs::path log_path = o.log ? *o.log : fs::path(o.output.string() + ".log");
  out.add(log_path, stages.str());
  out.commit();
  log << "prepared " << table.size() << " vehicles with " << table.feature_names.size()
      << " features from " << parsed.log.input << " job rows\n";
}

void cmd_tune(const TuneOptions& o, std::ostream& log) {
  CvSettings cv;
  cv.family = parse_kernel_family(o.kernel);
  cv.coef0 = o.coef0;
  cv.membership.scheme = parse_membership_scheme(o.membership);
  if (o.unit_costs) cv.costs = ClassCosts{};
  cv.nu = o.nu;
  cv.seed = o.seed;
  cv.tol = o.tol;
  GridSpec spec;
  spec.c_exponents = parse_exponent_range(o.c_range);
  spec.gamma_exponents = parse_exponent_range(o.gamma_range);
  spec.fine_step = o.fine_step;
  spec.fine_radius = o.fine_radius;
  spec.validate();

  Dataset data = read_feature_csv(o.data).to_dataset();
  data.features = Standardizer::fit(data.features).transform(data.features);
  GridSearchOptions options;
  options.jobs = o.jobs;
  const GridSearchReport report = grid_search(data, spec, cv, options);

  std::ostringstream csv;
  report.write_csv(csv);
  OutputSet out;
  out.add(o.output, csv.str());
  out.commit();
  log << "coarse best C=2^" << format_decimal(report.best_coarse.c_exp) << " gamma=2^"
      << format_decimal(report.best_coarse.gamma_exp) << " accuracy "
      << format_decimal(report.best_coarse.cv_accuracy) << '\n';
  log << "fine best C=2^" << format_decimal(report.best_fine.c_exp) << " gamma=2^"
      << format_decimal(report.best_fine.gamma_exp) << " accuracy "
      << format_decimal(report.best_fine.cv_accuracy) << '\n';
}

void cmd_train(const TrainOptions& o, std::ostream& log) {
  ModelFile file;
  file.variant = parse_variant(o.variant);

  std::optional<double> C = o.C;
  std::optional<double> gamma = o.gamma;
  if (o.from_tune) {
    std::ifstream in(*o.from_tune, std::ios::binary);
    if (!in) throw InputError("cannot open tuning report '" + o.from_tune->string() + "'");
    const GridSearchReport report = GridSearchReport::read_csv(in);
    if (!C) C = std::exp2(report.best_fine.c_exp);
    if (!gamma) gamma = std::exp2(report.best_fine.gamma_exp);
  }
  if (file.variant != Variant::Logistic && (!C || !gamma)) {
    throw ConfigError("train needs --from-tune or both --C and --gamma");
  }

  const FeatureTable table = read_feature_csv(o.data);
  Dataset data = table.to_dataset();
  file.feature_names = table.feature_names;
  file.scaler = Standardizer::fit(data.features);
  data.features = file.scaler.transform(data.features);

  if (file.variant == Variant::Logistic) {
    if (!(o.l2 >= 0.0)) throw ConfigError("--l2 must be non-negative");
    const LogisticModel m = logistic_baseline(data, o.l2);
    log << "logistic baseline: " << m.iterations << " Newton steps"
        << (m.converged ? "" : " (not converged)") << '\n';
    file.model = m;
  } else {
    MfsvmConfig layer;
    layer.kernel = {parse_kernel_family(o.kernel), *gamma, o.coef0};
    layer.C = *C;
    layer.membership.scheme = membership_for(file.variant);
    layer.costs = o.unit_costs ? ClassCosts{} : inverse_frequency_costs(data.labels);
    layer.tol = o.tol;
    if (file.variant == Variant::Hmfsvm) {
      HierarchyConfig hc = HierarchyConfig::uniform(layer);
      if (o.codebook_sizes.size() != hc.codebook_sizes.size()) {
        throw ConfigError("--codebook-sizes expects four values");
      }
      std::copy(o.codebook_sizes.begin(), o.codebook_sizes.end(), hc.codebook_sizes.begin());
      hc.bmu_count = o.bmu_count;
      hc.impurity_threshold = o.impurity_threshold;
      hc.min_unit_examples = o.min_unit;
      hc.seed = o.seed;
      hc.jobs = o.jobs;
      hc.validate();
      const HierarchyModel m = train_hierarchy(sequences_from_static(data), hc);
      log << "hmfsvm: " << m.units.size() << " units, " << m.specialist_count()
          << " specialists\n";
      file.model = m;
    } else {
      const MfsvmModel m = train(data, layer);
      log << to_string(file.variant) << ": " << m.support_count() << " support vectors of "
          << m.n_train << (m.converged ? "" : " (iteration cap reached)") << '\n';
      file.model = m;
    }
  }

  OutputSet out;
  out.add(o.output, file.to_string());
  out.commit();
}

void cmd_predict(const PredictOptions& o, std::ostream& log) {
  const ModelFile model = ModelFile::load(o.model);
  const FeatureTable table = read_feature_csv(o.data).aligned_to(model.feature_names);

  std::ostringstream csv;
  write_csv_row(csv, {"vehicle_id", "probability", "bucket"});
  BucketTally tally;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double p = model.predict(table.features[i]);
    const RiskBucket b = bucket_risk(p);
    tally.add(b);
    write_csv_row(csv, {table.ids[i], format_decimal(p), std::string(to_string(b))});
  }
  OutputSet out;
  out.add(o.output, csv.str());
  out.commit();
  log << "predicted " << table.size() << " vehicles\n";
  tally.write_table(log);
}

void cmd_evaluate(const EvaluateOptions& o, std::ostream& log) {
  if (!(o.threshold > 0.0 && o.threshold < 1.0)) throw ConfigError("--threshold must lie in (0, 1)");
  const Predictions pred = read_predictions(o.predictions);
  const FeatureTable truth_table = read_feature_csv(o.truth);
  if (!truth_table.labels) throw InputError("'" + o.truth.string() + "' has no label column");
  std::unordered_map<std::string, int> truth;
  for (std::size_t i = 0; i < truth_table.size(); ++i) {
    truth.emplace(truth_table.ids[i], (*truth_table.labels)[i]);
  }
  std::vector<int> labels;
  for (const auto& id : pred.ids) {
    const auto it = truth.find(id);
    if (it == truth.end()) throw InputError("no label for vehicle '" + id + "' in '" + o.truth.string() + "'");
    labels.push_back(it->second);
  }

  const std::vector<int> predicted = threshold_labels(pred.probabilities, o.threshold);
  const ConfusionCounts cc = confusion(predicted, labels);
  const ClassificationMetrics m = metrics(cc);
  const RocCurve roc = roc_auc(pred.probabilities, labels);
  const BucketTally tally = tally_buckets(pred.probabilities);

  std::ostringstream report;
  report << "samples " << cc.total() << '\n'
         << "threshold " << format_decimal(o.threshold) << '\n'
         << "tp " << cc.tp << "\nfn " << cc.fn << "\ntn " << cc.tn << "\nfp " << cc.fp << '\n'
         << "sensitivity " << opt_rate(m.sensitivity) << '\n'
         << "specificity " << opt_rate(m.specificity) << '\n'
         << "accuracy " << format_decimal(m.accuracy) << '\n'
         << "auc " << format_decimal(roc.auc) << '\n';
  std::ostringstream roc_csv, buckets;
  write_roc_csv(roc_csv, roc);
  tally.write_table(buckets);

  OutputSet out;
  out.add(o.output_dir / "metrics.txt", report.str());
  out.add(o.output_dir / "roc.csv", roc_csv.str());
  out.add(o.output_dir / "buckets.csv", buckets.str());

  if (o.compare) {
    const Predictions other = read_predictions(*o.compare);
    std::unordered_map<std::string, double> by_id;
    for (std::size_t i = 0; i < other.ids.size(); ++i) by_id.emplace(other.ids[i], other.probabilities[i]);
    if (by_id.size() != pred.ids.size()) {
      throw InputError("'" + o.compare->string() + "' does not cover the same vehicles");
    }
    std::vector<double> aligned;
    for (const auto& id : pred.ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw InputError("'" + o.compare->string() + "' has no prediction for '" + id + "'");
      aligned.push_back(it->second);
    }
    const McNemarResult r = mcnemar(predicted, threshold_labels(aligned, o.threshold), labels);
    std::ostringstream text;
    text << "b " << r.b << "\nc " << r.c << '\n'
         << "statistic " << format_decimal(r.statistic) << '\n'
         << "p_chi_square " << format_decimal(r.p_chi_square) << '\n'
         << "p_exact " << format_decimal(r.p_exact) << '\n'
         << "p_value " << format_decimal(r.p_value) << '\n'
         << "method " << method_name(r.method) << '\n'
         << "no_discordance " << (r.no_discordance ? "yes" : "no") << '\n';
    out.add(o.output_dir / "mcnemar.txt", text.str());
    log << "mcnemar b=" << r.b << " c=" << r.c << " p=" << format_decimal(r.p_value) << '\n';
  }

  if (!fs::is_directory(o.output_dir)) {
    std::error_code ec;
    fs::create_directories(o.output_dir, ec);
    if (ec) throw InputError("cannot create '" + o.output_dir.string() + "': " + ec.message());
  }
  out.commit();
  log << report.str();
  tally.write_table(log);
}

void cmd_report(const ReportOptions& o, std::ostream& log) {
  if (o.top == 0) throw ConfigError("--top must be at least 1");
  const ParsedJobs parsed = parse_fleet_csv(o.input, schema_from(o.columns));
  const CleanedJobs cleaned = clean(parsed.records);

  struct Summary {
    std::size_t jobs = 0;
    double hours = 0.0;
    std::map<std::string, std::size_t> areas;
  };
  std::map<std::string, Summary> vehicles;
  for (const auto& r : cleaned.records) {
    Summary& s = vehicles[r.vehicle_id];
    ++s.jobs;
    s.hours += r.labor_hours.value_or(0.0);
    ++s.areas[r.work_area];
  }
  std::optional<std::unordered_map<std::string, double>> probs;
  if (o.predictions) {
    const Predictions p = read_predictions(*o.predictions);
    probs.emplace();
    for (std::size_t i = 0; i < p.ids.size(); ++i) probs->emplace(p.ids[i], p.probabilities[i]);
  }

  std::ostringstream csv;
  std::vector<std::string> header{"vehicle_id", "total_jobs", "total_labor_hours",
                                  "avg_labor_hours", "top_services"};
  if (probs) {
    header.emplace_back("probability");
    header.emplace_back("bucket");
  }
  write_csv_row(csv, header);
  for (const auto& [id, s] : vehicles) {
    std::vector<std::pair<std::string, std::size_t>> areas(s.areas.begin(), s.areas.end());
    std::stable_sort(areas.begin(), areas.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::string top;
    for (std::size_t i = 0; i < std::min(o.top, areas.size()); ++i) {
      if (i) top += ';';
      top += areas[i].first;
    }
    std::vector<std::string> row{id, std::to_string(s.jobs), format_decimal(s.hours),
                                 format_decimal(s.hours / static_cast<double>(s.jobs)), top};
    if (probs) {
      const auto it = probs->find(id);
      row.push_back(it == probs->end() ? "" : format_decimal(it->second));
      row.push_back(it == probs->end() ? "" : std::string(to_string(bucket_risk(it->second))));
    }
    write_csv_row(csv, row);
  }
  OutputSet out;
  out.add(o.output, csv.str());
  out.commit();
  log << "reported " << vehicles.size() << " vehicles from " << cleaned.log.retained
      << " clean job rows\n";
}

void cmd_synth(const SynthOptions& o, std::ostream& log) {
  FleetSynthConfig config;
  config.vehicles = o.vehicles;
  config.seed = o.seed;
  config.as_of = require_date(o.as_of, "--as-of");
  config.out_of_bounds_fraction = o.out_of_bounds;
  config.dirty_fraction = o.dirty;
  if (config.vehicles == 0) throw ConfigError("--vehicles must be at least 1");
  if (!(o.out_of_bounds >= 0.0 && o.out_of_bounds <= 1.0) || !(o.dirty >= 0.0 && o.dirty <= 1.0)) {
    throw ConfigError("fractions must lie in [0, 1]");
  }
  std::ostringstream csv;
  const FleetSynthSummary s = write_synthetic_fleet(csv, config);
  OutputSet out;
  out.add(o.output, csv.str());
  out.commit();
  log << "wrote " << s.rows << " job rows for " << s.vehicles << " vehicles (" << s.failing_vehicles
      << " failing, " << s.dirty_rows << " damaged rows)\n";
}

}  // namespace hmfsvm::cli
