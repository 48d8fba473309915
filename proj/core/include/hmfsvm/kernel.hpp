#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmfsvm/dataset.hpp"

namespace hmfsvm {

enum class KernelFamily { Linear, Rbf, Sigmoid };

std::string_view to_string(KernelFamily family) noexcept;
// Accepts "linear", "rbf", "sigmoid" (also "tanh"); throws ConfigError otherwise.
KernelFamily parse_kernel_family(std::string_view name);

/// Kernel family plus its parameters.
///
/// linear:  K(x, y) = <x, y>
/// rbf:     K(x, y) = exp(-gamma |x - y|^2)
/// sigmoid: K(x, y) = tanh(gamma <x, y> + coef0)
///
/// gamma and coef0 are ignored by the linear family. The sigmoid kernel is not
/// positive semidefinite for every (gamma, coef0); the solver copes with that.
struct KernelSpec {
  KernelFamily family = KernelFamily::Sigmoid;
  double gamma = 1.0;
  double coef0 = 0.0;

  // Throws ConfigError unless gamma > 0 and both parameters are finite.
  void validate() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// Dense symmetric kernel matrix. Entries are computed once for i <= j and
/// mirrored, so values(i, j) == values(j, i) bit for bit.
class GramMatrix {
 public:
  GramMatrix(const KernelSpec& spec, const std::vector<Vector>& points);

  std::size_t size() const noexcept { return n_; }
  const KernelSpec& spec() const noexcept { return spec_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * n_, n_};
  }
  bool all_finite() const noexcept;

 private:
  KernelSpec spec_;
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Throws InputError on an empty point set or mixed dimensions.
GramMatrix gram(const KernelSpec& spec, const std::vector<Vector>& points);

}  // namespace hmfsvm
