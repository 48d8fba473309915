#include "hmfsvm/kernel.hpp"

#include <cmath>
#include <string>

#include "hmfsvm/error.hpp"

namespace hmfsvm {

std::string_view to_string(KernelFamily family) noexcept {
  switch (family) {
    case KernelFamily::Linear:
      return "linear";
    case KernelFamily::Rbf:
      return "rbf";
    case KernelFamily::Sigmoid:
      return "sigmoid";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "linear") return KernelFamily::Linear;
  if (name == "rbf") return KernelFamily::Rbf;
  if (name == "sigmoid" || name == "tanh") return KernelFamily::Sigmoid;
  throw ConfigError("unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("kernel gamma must be a finite positive number, got " + std::to_string(gamma));
  }
  if (!std::isfinite(coef0)) {
    throw ConfigError("kernel coef0 must be finite");
  }
}

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InputError("kernel arguments differ in dimension: " + std::to_string(x.size()) +
                     " vs " + std::to_string(y.size()));
  }
  switch (spec.family) {
    case KernelFamily::Linear:
      return dot(x, y);
    case KernelFamily::Rbf:
      return std::exp(-spec.gamma * squared_distance(x, y));
    case KernelFamily::Sigmoid:
      return std::tanh(spec.gamma * dot(x, y) + spec.coef0);
  }
  return 0.0;
}

GramMatrix::GramMatrix(const KernelSpec& spec, const std::vector<Vector>& points)
    : spec_(spec), n_(points.size()) {
  if (points.empty()) {
    throw InputError("cannot build a Gram matrix over an empty point set");
  }
  spec.validate();
  const std::size_t d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) {
      throw InputError("Gram matrix points have mixed dimensions");
    }
  }
  values_.assign(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      const double k = eval_kernel(spec, points[i], points[j]);
      values_[i * n_ + j] = k;
      values_[j * n_ + i] = k;
    }
  }
}

bool GramMatrix::all_finite() const noexcept {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

GramMatrix gram(const KernelSpec& spec, const std::vector<Vector>& points) {
  return GramMatrix(spec, points);
}

}  // namespace hmfsvm
