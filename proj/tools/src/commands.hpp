#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hmfsvm::cli {

namespace fs = std::filesystem;

// Every command computes all of its outputs first and publishes them only at
// the end, so a failure leaves existing files untouched. Library exceptions
// propagate; run() maps them to exit codes. Progress goes to `log`.

struct PrepareOptions {
  fs::path input;
  fs::path output;
  std::optional<fs::path> log;  // stage logs; defaults to <output>.log
  std::string as_of;
  bool balance = false;
  std::uint64_t seed = 0;
  std::vector<std::string> columns;  // field=source overrides of the schema
};

struct TuneOptions {
  fs::path data;
  fs::path output;
  std::string kernel = "sigmoid";
  double coef0 = 0.0;
  std::string membership = "kernel_space";
  std::size_t nu = 5;
  std::string c_range = "-5:17:2";
  std::string gamma_range = "-18:4:2";
  double fine_step = 0.25;
  double fine_radius = 1.0;
  bool unit_costs = false;
  double tol = 1e-3;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct TrainOptions {
  fs::path data;
  fs::path output;
  std::string variant = "mfsvm";
  std::optional<fs::path> from_tune;
  std::optional<double> C;
  std::optional<double> gamma;
  std::string kernel = "sigmoid";
  double coef0 = 0.0;
  double l2 = 1e-2;
  double tol = 1e-3;
  bool unit_costs = false;
  std::vector<std::size_t> codebook_sizes{8, 16, 16, 16};
  std::size_t bmu_count = 16;
  double impurity_threshold = 0.1;
  std::size_t min_unit = 20;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct PredictOptions {
  fs::path model;
  fs::path data;
  fs::path output;
};

struct EvaluateOptions {
  fs::path predictions;
  fs::path truth;
  fs::path output_dir;
  std::optional<fs::path> compare;
  double threshold = 0.5;
};

struct ReportOptions {
  fs::path input;
  fs::path output;
  std::optional<fs::path> predictions;
  std::size_t top = 3;
  std::vector<std::string> columns;
};

struct SynthOptions {
  fs::path output;
  std::size_t vehicles = 800;
  std::uint64_t seed = 0;
  std::string as_of = "2017-01-01";
  double out_of_bounds = 0.05;
  double dirty = 0.02;
};

void cmd_prepare(const PrepareOptions& o, std::ostream& log);
void cmd_tune(const TuneOptions& o, std::ostream& log);
void cmd_train(const TrainOptions& o, std::ostream& log);
void cmd_predict(const PredictOptions& o, std::ostream& log);
void cmd_evaluate(const EvaluateOptions& o, std::ostream& log);
void cmd_report(const ReportOptions& o, std::ostream& log);
void cmd_synth(const SynthOptions& o, std::ostream& log);

// "start:stop:step" -> start, start + step, ... up to stop inclusive.
std::vector<double> parse_exponent_range(const std::string& text);

}  // namespace hmfsvm::cli
