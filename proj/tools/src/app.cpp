#include "app.hpp"

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "hmfsvm/error.hpp"

namespace hmfsvm::cli {
namespace {

constexpr int kInputError = 1;
constexpr int kConfigError = 2;
constexpr int kInternalError = 3;

void add_seed_jobs(CLI::App* cmd, std::uint64_t& seed, std::size_t* jobs) {
  cmd->add_option("--seed", seed, "Seed for every random choice");
  if (jobs) cmd->add_option("--jobs", *jobs, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Fuzzy SVM training and fleet failure prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hmfsvm 0.1.0");

  PrepareOptions prep;
  auto* prepare = app.add_subcommand(
      "prepare",
      "Job log CSV -> per-vehicle feature CSV. Keeps vehicles with age < 14 years and "
      "100 < odometer < 182000 (strict bounds); every removal is logged.");
  prepare->add_option("--input", prep.input, "Garage job CSV")->required();
  prepare->add_option("--output", prep.output, "Feature CSV to write")->required();
  prepare->add_option("--as-of", prep.as_of, "Reference date (YYYY-MM-DD)")->required();
  prepare->add_option("--log", prep.log, "Stage log file (default <output>.log)");
  prepare->add_flag("--balance", prep.balance, "Undersample the majority class");
  prepare->add_option("--column", prep.columns,
                      "Source column for a field, e.g. vehicle_id=reg_no (repeatable)");
  add_seed_jobs(prepare, prep.seed, nullptr);

  TuneOptions tune;
  auto* tune_cmd = app.add_subcommand("tune", "Coarse-then-fine grid search over log2 C and log2 gamma");
  tune_cmd->add_option("--data", tune.data, "Feature CSV with labels")->required();
  tune_cmd->add_option("--output", tune.output, "Grid report CSV to write")->required();
  tune_cmd->add_option("--kernel", tune.kernel, "linear, rbf or sigmoid")->capture_default_str();
  tune_cmd->add_option("--coef0", tune.coef0, "Sigmoid kernel offset")->capture_default_str();
  tune_cmd->add_option("--membership", tune.membership, "uniform, input_space or kernel_space")
      ->capture_default_str();
  tune_cmd->add_option("--nu", tune.nu, "Cross-validation folds")->capture_default_str();
  tune_cmd->add_option("--c-range", tune.c_range, "log2 C lattice start:stop:step")
      ->capture_default_str();
  tune_cmd->add_option("--gamma-range", tune.gamma_range, "log2 gamma lattice start:stop:step")
      ->capture_default_str();
  tune_cmd->add_option("--fine-step", tune.fine_step)->capture_default_str();
  tune_cmd->add_option("--fine-radius", tune.fine_radius)->capture_default_str();
  tune_cmd->add_option("--tol", tune.tol, "Solver tolerance")->capture_default_str();
  tune_cmd->add_flag("--unit-costs", tune.unit_costs, "Equal class costs instead of inverse frequency");
  add_seed_jobs(tune_cmd, tune.seed, &tune.jobs);

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a feature CSV");
  train_cmd->add_option("--data", tr.data, "Feature CSV with labels")->required();
  train_cmd->add_option("--output", tr.output, "Model file to write")->required();
  train_cmd->add_option("--variant", tr.variant, "svm, fsvm, mfsvm, hmfsvm or logistic")
      ->capture_default_str();
  train_cmd->add_option("--from-tune", tr.from_tune, "Take C and gamma from a grid report");
  train_cmd->add_option("--C", tr.C, "Penalty (overrides --from-tune)");
  train_cmd->add_option("--gamma", tr.gamma, "Kernel gamma (overrides --from-tune)");
  train_cmd->add_option("--kernel", tr.kernel, "linear, rbf or sigmoid")->capture_default_str();
  train_cmd->add_option("--coef0", tr.coef0)->capture_default_str();
  train_cmd->add_option("--l2", tr.l2, "Logistic ridge strength")->capture_default_str();
  train_cmd->add_option("--tol", tr.tol, "Solver tolerance")->capture_default_str();
  train_cmd->add_flag("--unit-costs", tr.unit_costs, "Equal class costs instead of inverse frequency");
  train_cmd->add_option("--codebook-sizes", tr.codebook_sizes, "Quantizer sizes between layers 1..5")
      ->expected(4)
      ->capture_default_str();
  train_cmd->add_option("--bmu-count", tr.bmu_count, "Layer-5 units")->capture_default_str();
  train_cmd->add_option("--impurity-threshold", tr.impurity_threshold, "Specialist error threshold")
      ->capture_default_str();
  train_cmd->add_option("--min-unit", tr.min_unit, "Smallest unit that may get a specialist")
      ->capture_default_str();
  add_seed_jobs(train_cmd, tr.seed, &tr.jobs);

  PredictOptions pr;
  auto* predict = app.add_subcommand("predict", "Failure probability and risk bucket per vehicle");
  predict->add_option("--model", pr.model, "Model file")->required();
  predict->add_option("--data", pr.data, "Feature CSV")->required();
  predict->add_option("--output", pr.output, "Prediction CSV to write")->required();

  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Metrics, ROC curve and bucket table for predictions");
  evaluate->add_option("--predictions", ev.predictions, "Prediction CSV")->required();
  evaluate->add_option("--truth", ev.truth, "Feature CSV with labels")->required();
  evaluate->add_option("--output-dir", ev.output_dir, "Directory for the reports")->required();
  evaluate->add_option("--compare", ev.compare, "Second prediction CSV for a McNemar test");
  evaluate->add_option("--threshold", ev.threshold, "Probability at which a vehicle counts as failing")
      ->capture_default_str();

  ReportOptions rep;
  auto* report = app.add_subcommand("report", "Per-vehicle service summary of a job log");
  report->add_option("--input", rep.input, "Garage job CSV")->required();
  report->add_option("--output", rep.output, "Report CSV to write")->required();
  report->add_option("--predictions", rep.predictions, "Prediction CSV to join");
  report->add_option("--top", rep.top, "Work areas listed per vehicle")->capture_default_str();
  report->add_option("--column", rep.columns, "Source column for a field (repeatable)");

  SynthOptions sy;
  auto* synth = app.add_subcommand("synth", "Write a synthetic garage job log");
  synth->add_option("--output", sy.output, "Job CSV to write")->required();
  synth->add_option("--vehicles", sy.vehicles)->capture_default_str();
  synth->add_option("--as-of", sy.as_of)->capture_default_str();
  synth->add_option("--out-of-bounds", sy.out_of_bounds, "Share of vehicles outside the filters")
      ->capture_default_str();
  synth->add_option("--dirty", sy.dirty, "Share of damaged rows")->capture_default_str();
  add_seed_jobs(synth, sy.seed, nullptr);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*prepare) cmd_prepare(prep, std::cout);
    else if (*tune_cmd) cmd_tune(tune, std::cout);
    else if (*train_cmd) cmd_train(tr, std::cout);
    else if (*predict) cmd_predict(pr, std::cout);
    else if (*evaluate) cmd_evaluate(ev, std::cout);
    else if (*report) cmd_report(rep, std::cout);
    else if (*synth) cmd_synth(sy, std::cout);
    return 0;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const TrainingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace hmfsvm::cli
