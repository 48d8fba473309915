#include "hmfsvm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hmfsvm/error.hpp"

namespace hmfsvm {
namespace {

bool can_increase(int y, double alpha, double cap) { return y > 0 ? alpha < cap : alpha > 0.0; }
bool can_decrease(int y, double alpha, double cap) { return y > 0 ? alpha > 0.0 : alpha < cap; }

struct ViolatingPair {
  std::size_t up = 0;
  std::size_t low = 0;
  double max_up = -std::numeric_limits<double>::infinity();
  double min_low = std::numeric_limits<double>::infinity();
  bool found() const { return std::isfinite(max_up) && std::isfinite(min_low); }
  double gap() const { return max_up - min_low; }
};

ViolatingPair select_pair(std::span<const int> y, const std::vector<double>& alpha,
                          const std::vector<double>& cap, const std::vector<double>& grad) {
  ViolatingPair p;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double v = -y[t] * grad[t];
    if (can_increase(y[t], alpha[t], cap[t]) && v > p.max_up) {
      p.max_up = v;
      p.up = t;
    }
    if (can_decrease(y[t], alpha[t], cap[t]) && v < p.min_low) {
      p.min_low = v;
      p.low = t;
    }
  }
  return p;
}

}  // namespace

void ClassCosts::validate() const {
  if (!(positive > 0.0) || !(negative > 0.0) || !std::isfinite(positive) ||
      !std::isfinite(negative)) {
    throw ConfigError("class costs must be finite and positive");
  }
}

ClassCosts inverse_frequency_costs(std::span<const int> labels) {
  require_both_classes(labels, "inverse-frequency costs");
  const LabelCounts c = count_labels(labels);
  return {static_cast<double>(c.negative) / static_cast<double>(c.positive), 1.0};
}

void SolverConfig::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw ConfigError("C must be finite and positive");
  if (!(tol > 0.0)) throw ConfigError("solver tolerance must be positive");
  if (!(eta_guard > 0.0)) throw ConfigError("eta_guard must be positive");
  costs.validate();
}

double dual_objective(std::span<const double> alphas, std::span<const int> labels,
                      const GramMatrix& gram) {
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    linear += alphas[i];
    if (alphas[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      row += alphas[j] * labels[j] * gram(i, j);
    }
    quad += alphas[i] * labels[i] * row;
  }
  return linear - 0.5 * quad;
}

TrainedSvm solve(const GramMatrix& gram, std::span<const int> labels,
                 std::span<const double> memberships, const SolverConfig& config,
                 std::vector<double>* objective_trace) {
  config.validate();
  const std::size_t n = gram.size();
  if (labels.size() != n || memberships.size() != n) {
    throw InputError("solver inputs disagree in length: gram " + std::to_string(n) + ", labels " +
                     std::to_string(labels.size()) + ", memberships " +
                     std::to_string(memberships.size()));
  }
  if (!gram.all_finite()) throw InputError("Gram matrix contains non-finite entries");
  for (int y : labels) {
    if (y != 1 && y != -1) throw InputError("labels must be -1 or +1");
  }
  require_both_classes(labels, "SVM training");
  for (double sp : memberships) {
    if (!(sp > 0.0 && sp <= 1.0)) throw InputError("memberships must lie in (0, 1]");
  }

  TrainedSvm model;
  model.kernel = gram.spec();
  model.labels.assign(labels.begin(), labels.end());
  model.upper_bounds.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.upper_bounds[i] = config.C * memberships[i] * config.costs.of(labels[i]);
  }
  const std::vector<double>& cap = model.upper_bounds;
  std::vector<double>& alpha = model.alphas;
  alpha.assign(n, 0.0);

  // Gradient of f(a) = 1/2 a'Qa - sum a, with Q_ij = y_i y_j K_ij.
  std::vector<double> grad(n, -1.0);
  double f = 0.0;

  const std::size_t max_iter =
      config.max_iterations > 0 ? config.max_iterations : std::max<std::size_t>(100000, 1000 * n);

  for (model.iterations = 0; model.iterations < max_iter; ++model.iterations) {
    const ViolatingPair p = select_pair(labels, alpha, cap, grad);
    if (!p.found() || p.gap() < config.tol) {
      model.converged = true;
      break;
    }
    const std::size_t i = p.up;
    const std::size_t j = p.low;
    const int yi = labels[i];
    const int yj = labels[j];

    // Move along a_i += y_i t, a_j -= y_j t, which keeps sum a y fixed.
    const double eta = gram(i, i) + gram(j, j) - 2.0 * gram(i, j);
    const double curvature = std::max(eta, config.eta_guard);
    const double room_i = yi > 0 ? cap[i] - alpha[i] : alpha[i];
    const double room_j = yj > 0 ? alpha[j] : cap[j] - alpha[j];
    double t = p.gap() / curvature;
    t = std::min({t, room_i, room_j});

    const double delta_f = -p.gap() * t + 0.5 * eta * t * t;
    if (!(delta_f < 0.0)) break;

    if (t == room_i) {
      alpha[i] = yi > 0 ? cap[i] : 0.0;
    } else {
      alpha[i] += yi * t;
    }
    if (t == room_j) {
      alpha[j] = yj > 0 ? 0.0 : cap[j];
    } else {
      alpha[j] -= yj * t;
    }
    const auto ki = gram.row(i);
    const auto kj = gram.row(j);
    for (std::size_t k = 0; k < n; ++k) {
      grad[k] += labels[k] * t * (ki[k] - kj[k]);
    }
    f += delta_f;
    if (objective_trace != nullptr) objective_trace->push_back(-f);
  }

  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > kSupportThreshold && alpha[t] < cap[t] - kSupportThreshold) {
      free_sum += -labels[t] * grad[t];
      ++free_count;
    }
  }
  if (free_count > 0) {
    model.bias = free_sum / static_cast<double>(free_count);
  } else {
    const ViolatingPair p = select_pair(labels, alpha, cap, grad);
    if (std::isfinite(p.max_up) && std::isfinite(p.min_low)) {
      model.bias = 0.5 * (p.max_up + p.min_low);
    } else {
      model.bias = std::isfinite(p.max_up) ? p.max_up : p.min_low;
    }
  }

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > kSupportThreshold) model.support_indices.push_back(t);
  }
  model.objective = dual_objective(alpha, labels, gram);
  return model;
}

double decision_value(const TrainedSvm& model, std::span<const double> x,
                      const std::vector<Vector>& training_points) {
  if (training_points.size() != model.alphas.size()) {
    throw InputError("training point count does not match the model");
  }
  double f = model.bias;
  for (std::size_t i : model.support_indices) {
    if (training_points[i].size() != x.size()) {
      throw InputError("sample dimension " + std::to_string(x.size()) +
                       " does not match model dimension " +
                       std::to_string(training_points[i].size()));
    }
    f += model.alphas[i] * model.labels[i] * eval_kernel(model.kernel, training_points[i], x);
  }
  return f;
}

double kkt_report(const TrainedSvm& model, const GramMatrix& gram) {
  const std::size_t n = model.alphas.size();
  if (gram.size() != n) throw InputError("Gram matrix size does not match the model");
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = model.bias;
    for (std::size_t j = 0; j < n; ++j) {
      if (model.alphas[j] != 0.0) f += model.alphas[j] * model.labels[j] * gram(i, j);
    }
    const double margin = model.labels[i] * f - 1.0;
    double v = 0.0;
    if (model.alphas[i] <= kSupportThreshold) {
      v = std::max(0.0, -margin);
    } else if (model.alphas[i] >= model.upper_bounds[i] - kSupportThreshold) {
      v = std::max(0.0, margin);
    } else {
      v = std::abs(margin);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace hmfsvm
