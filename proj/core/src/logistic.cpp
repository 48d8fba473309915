#include "hmfsvm/logistic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "hmfsvm/error.hpp"
#include "hmfsvm/text_io.hpp"

namespace hmfsvm {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double logit(const LogisticModel& m, std::span<const double> x) { return dot(m.weights, x) + m.intercept; }

double max_abs(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double LogisticModel::predict_prob(std::span<const double> x) const {
  if (x.size() != weights.size()) throw InputError("sample dimension does not match logistic model");
  return sigmoid(logit(*this, x));
}

void LogisticModel::write(TokenWriter& out) const {
  out.word(kSchema).integer(kVersion).newline();
  out.word("weights").reals(weights).newline();
  out.word("intercept").real(intercept).newline();
  out.word("fit").integer(static_cast<std::int64_t>(iterations)).integer(converged ? 1 : 0).newline();
  out.word("end").newline();
}

LogisticModel LogisticModel::read(TokenReader& in) {
  LogisticModel m;
  in.expect_header(kSchema, kVersion);
  in.expect("weights");
  m.weights = in.reals();
  in.expect("intercept");
  m.intercept = in.real();
  in.expect("fit");
  m.iterations = in.count();
  m.converged = in.integer() != 0;
  in.expect("end");
  return m;
}

double logistic_objective(const LogisticModel& model, const Dataset& data, double l2_strength) {
  double f = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double z = logit(model, data.features[i]);
    // -log p(y | x) with y in {-1, +1}
    f += softplus(-data.labels[i] * z);
  }
  return f + 0.5 * l2_strength * dot(model.weights, model.weights);
}

Vector logistic_gradient(const LogisticModel& model, const Dataset& data, double l2_strength) {
  const std::size_t d = model.weights.size();
  Vector g(d + 1, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double t = data.labels[i] > 0 ? 1.0 : 0.0;
    const double r = sigmoid(logit(model, data.features[i])) - t;
    for (std::size_t k = 0; k < d; ++k) g[k] += r * data.features[i][k];
    g[d] += r;
  }
  for (std::size_t k = 0; k < d; ++k) g[k] += l2_strength * model.weights[k];
  return g;
}

LogisticModel logistic_baseline(const Dataset& data, double l2_strength, std::size_t max_iter) {
  data.validate();
  require_both_classes(data.labels, "logistic regression");
  if (l2_strength < 0.0) throw ConfigError("l2 strength must be nonnegative");
  const std::size_t d = data.dim();
  LogisticModel m;
  m.weights.assign(d, 0.0);

  // The gradient is a sum over samples, so the tolerance scales with n.
  const double tol = 1e-10 * static_cast<double>(std::max<std::size_t>(1, data.size()));
  double f = logistic_objective(m, data, l2_strength);
  for (m.iterations = 0; m.iterations < max_iter; ++m.iterations) {
    const Vector g = logistic_gradient(m, data, l2_strength);
    if (max_abs(g) <= tol) {
      m.converged = true;
      break;
    }
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d + 1), static_cast<Eigen::Index>(d + 1));
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double p = sigmoid(logit(m, data.features[i]));
      const double w = p * (1.0 - p);
      Eigen::VectorXd x(static_cast<Eigen::Index>(d + 1));
      for (std::size_t k = 0; k < d; ++k) x[static_cast<Eigen::Index>(k)] = data.features[i][k];
      x[static_cast<Eigen::Index>(d)] = 1.0;
      h.noalias() += w * x * x.transpose();
    }
    for (std::size_t k = 0; k < d; ++k) h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) += l2_strength;
    h.diagonal().array() += 1e-12;
    const Eigen::Map<const Eigen::VectorXd> grad(g.data(), static_cast<Eigen::Index>(d + 1));
    const Eigen::VectorXd step = h.ldlt().solve(grad);

    double t = 1.0;
    bool accepted = false;
    while (t >= 1e-12) {
      LogisticModel trial = m;
      for (std::size_t k = 0; k < d; ++k) trial.weights[k] -= t * step[static_cast<Eigen::Index>(k)];
      trial.intercept -= t * step[static_cast<Eigen::Index>(d)];
      const double ft = logistic_objective(trial, data, l2_strength);
      if (ft <= f) {
        m.weights = std::move(trial.weights);
        m.intercept = trial.intercept;
        f = ft;
        accepted = true;
        break;
      }
      t /= 2.0;
    }
    if (!accepted) {
      m.converged = max_abs(logistic_gradient(m, data, l2_strength)) <= 100.0 * tol;
      break;
    }
  }
  if (!m.converged && m.iterations == max_iter) {
    m.converged = max_abs(logistic_gradient(m, data, l2_strength)) <= tol;
  }
  return m;
}

}  // namespace hmfsvm
