#include "hmfsvm/mfsvm.hpp"

#include <algorithm>
#include <sstream>

#include "hmfsvm/error.hpp"
#include "hmfsvm/text_io.hpp"

namespace hmfsvm {

int label_from_decision(double decision) noexcept { return decision >= 0.0 ? 1 : -1; }

namespace {

MfsvmModel train_impl(const Dataset& data, const MfsvmConfig& config,
                      const std::vector<double>* given) {
  data.validate();
  config.kernel.validate();
  config.membership.validate();
  const LabelCounts counts = count_labels(data.labels);
  if (counts.positive < 2 || counts.negative < 2) {
    throw TrainingError("training needs at least two samples per class (got " +
                        std::to_string(counts.positive) + " positive, " +
                        std::to_string(counts.negative) + " negative)");
  }

  const GramMatrix k = gram(config.kernel, data.features);
  MfsvmModel model;
  model.kernel = config.kernel;
  model.membership_spec = config.membership;
  model.C = config.C;
  model.costs = config.costs;
  model.n_train = data.size();
  if (given != nullptr) {
    if (given->size() != data.size()) {
      throw InputError("membership count " + std::to_string(given->size()) +
                       " does not match sample count " + std::to_string(data.size()));
    }
    model.memberships = *given;
  } else {
    model.memberships = compute_memberships(data, &k, config.membership);
  }

  SolverConfig sc;
  sc.C = config.C;
  sc.tol = config.tol;
  sc.max_iterations = config.max_iterations;
  sc.costs = config.costs;
  const TrainedSvm svm = solve(k, data.labels, model.memberships, sc);

  model.bias = svm.bias;
  model.iterations = svm.iterations;
  model.converged = svm.converged;
  for (std::size_t i : svm.support_indices) {
    model.support_vectors.push_back(data.features[i]);
    model.support_alphas.push_back(svm.alphas[i]);
    model.support_labels.push_back(svm.labels[i]);
  }

  if (config.calibrate && config.platt_folds >= 2 &&
      std::min(counts.positive, counts.negative) >= 2 * config.platt_folds) {
    // Held-out decision values: fold f takes every platt_folds-th member of
    // each class, starting at its f-th member.
    std::vector<std::size_t> fold(data.size());
    std::size_t seen_pos = 0, seen_neg = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      fold[i] = (data.labels[i] > 0 ? seen_pos++ : seen_neg++) % config.platt_folds;
    }
    MfsvmConfig inner = config;
    inner.calibrate = false;
    std::vector<double> decisions(data.size());
    for (std::size_t f = 0; f < config.platt_folds; ++f) {
      std::vector<std::size_t> fit_idx, held_idx;
      for (std::size_t i = 0; i < data.size(); ++i) (fold[i] == f ? held_idx : fit_idx).push_back(i);
      std::vector<double> fit_sp;
      if (given != nullptr) {
        for (std::size_t i : fit_idx) fit_sp.push_back((*given)[i]);
      }
      const MfsvmModel part =
          train_impl(subset(data, fit_idx), inner, given != nullptr ? &fit_sp : nullptr);
      for (std::size_t i : held_idx) decisions[i] = part.decision_value(data.features[i]);
    }
    model.platt = fit_platt(decisions, data.labels);
  } else if (config.calibrate) {
    std::vector<double> decisions(data.size(), svm.bias);
    for (std::size_t i = 0; i < data.size(); ++i) {
      for (std::size_t j : svm.support_indices) {
        decisions[i] += svm.alphas[j] * svm.labels[j] * k(i, j);
      }
    }
    model.platt = fit_platt(decisions, data.labels);
  }
  return model;
}

}  // namespace

MfsvmModel train(const Dataset& data, const MfsvmConfig& config) {
  return train_impl(data, config, nullptr);
}

MfsvmModel train(const Dataset& data, const MfsvmConfig& config,
                 std::span<const double> memberships) {
  const std::vector<double> sp(memberships.begin(), memberships.end());
  return train_impl(data, config, &sp);
}

double MfsvmModel::decision_value(std::span<const double> x) const {
  if (!support_vectors.empty() && x.size() != dim()) {
    throw InputError("sample dimension " + std::to_string(x.size()) +
                     " does not match model dimension " + std::to_string(dim()));
  }
  double f = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    f += support_alphas[i] * support_labels[i] * eval_kernel(kernel, support_vectors[i], x);
  }
  return f;
}

int MfsvmModel::predict_label(std::span<const double> x) const {
  return label_from_decision(decision_value(x));
}

double MfsvmModel::predict_prob(std::span<const double> x) const {
  if (!platt) throw StateError("model has no probability calibration");
  return platt->probability(decision_value(x));
}

void MfsvmModel::write(TokenWriter& out) const {
  out.word(kSchema).integer(kVersion).newline();
  out.word("kernel").word(hmfsvm::to_string(kernel.family)).real(kernel.gamma).real(kernel.coef0)
      .newline();
  out.word("membership")
      .word(hmfsvm::to_string(membership_spec.scheme))
      .real(membership_spec.theta)
      .real(membership_spec.epsilon)
      .real(membership_spec.floor)
      .newline();
  out.word("C").real(C).newline();
  out.word("costs").real(costs.positive).real(costs.negative).newline();
  out.word("bias").real(bias).newline();
  out.word("solver").integer(static_cast<std::int64_t>(iterations)).integer(converged ? 1 : 0)
      .newline();
  out.word("platt");
  if (platt) {
    out.integer(1).real(platt->a).real(platt->b);
  } else {
    out.integer(0);
  }
  out.newline();
  out.word("n_train").integer(static_cast<std::int64_t>(n_train)).newline();
  out.word("memberships").reals(memberships).newline();
  out.word("support")
      .integer(static_cast<std::int64_t>(support_vectors.size()))
      .integer(static_cast<std::int64_t>(dim()))
      .newline();
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    out.real(support_alphas[i]).integer(support_labels[i]);
    for (double v : support_vectors[i]) out.real(v);
    out.newline();
  }
  out.word("end").newline();
}

MfsvmModel MfsvmModel::read(TokenReader& in) {
  MfsvmModel m;
  in.expect_header(kSchema, kVersion);
  in.expect("kernel");
  m.kernel.family = parse_kernel_family(in.word());
  m.kernel.gamma = in.real();
  m.kernel.coef0 = in.real();
  in.expect("membership");
  m.membership_spec.scheme = parse_membership_scheme(in.word());
  m.membership_spec.theta = in.real();
  m.membership_spec.epsilon = in.real();
  m.membership_spec.floor = in.real();
  in.expect("C");
  m.C = in.real();
  in.expect("costs");
  m.costs.positive = in.real();
  m.costs.negative = in.real();
  in.expect("bias");
  m.bias = in.real();
  in.expect("solver");
  m.iterations = in.count();
  m.converged = in.integer() != 0;
  in.expect("platt");
  if (in.integer() != 0) {
    PlattCalibration p;
    p.a = in.real();
    p.b = in.real();
    m.platt = p;
  }
  in.expect("n_train");
  m.n_train = in.count();
  in.expect("memberships");
  m.memberships = in.reals();
  in.expect("support");
  const std::size_t count = in.count();
  const std::size_t d = in.count();
  for (std::size_t i = 0; i < count; ++i) {
    m.support_alphas.push_back(in.real());
    const auto y = in.integer();
    if (y != 1 && y != -1) throw InputError("support vector label must be -1 or +1");
    m.support_labels.push_back(static_cast<int>(y));
    Vector x(d);
    for (auto& v : x) v = in.real();
    m.support_vectors.push_back(std::move(x));
  }
  in.expect("end");
  return m;
}

std::string MfsvmModel::to_string() const {
  std::ostringstream os;
  TokenWriter w(os);
  write(w);
  return os.str();
}

MfsvmModel MfsvmModel::from_string(const std::string& text) {
  std::istringstream is(text);
  TokenReader r(is);
  return read(r);
}

}  // namespace hmfsvm
