#include "hmfsvm/membership.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmfsvm/error.hpp"

namespace hmfsvm {
namespace {

double frequency(std::span<const std::size_t> freq, std::size_t i) {
  return freq.empty() ? 1.0 : static_cast<double>(freq[i]);
}

void check_freq(std::span<const std::size_t> freq, const GramMatrix& gram) {
  if (freq.empty()) return;
  if (freq.size() != gram.size()) {
    throw InputError("frequency vector length does not match the Gram matrix");
  }
  for (std::size_t f : freq) {
    if (f == 0) throw InputError("sample frequencies must be positive");
  }
}

// Implicit class centre: row sums against the weighted members and the
// weighted mean of the within-class block.
struct KernelCentre {
  double mass = 0.0;    // m = sum of member frequencies
  double self = 0.0;    // 1/m^2 sum_ij f_i f_j K_ij
};

KernelCentre kernel_centre(std::span<const std::size_t> members, const GramMatrix& gram,
                           std::span<const std::size_t> freq) {
  KernelCentre c;
  for (std::size_t i : members) c.mass += frequency(freq, i);
  double total = 0.0;
  for (std::size_t i : members) {
    double row = 0.0;
    for (std::size_t j : members) row += frequency(freq, j) * gram(i, j);
    total += frequency(freq, i) * row;
  }
  c.self = total / (c.mass * c.mass);
  return c;
}

double distance_to_centre(std::size_t i, std::span<const std::size_t> members,
                          const GramMatrix& gram, std::span<const std::size_t> freq,
                          const KernelCentre& c) {
  double cross = 0.0;
  for (std::size_t j : members) cross += frequency(freq, j) * gram(i, j);
  const double d2 = gram(i, i) - 2.0 * cross / c.mass + c.self;
  return std::max(0.0, d2);
}

void check_members(std::span<const std::size_t> members, const GramMatrix& gram) {
  if (members.empty()) throw TrainingError("class has no members");
  for (std::size_t i : members) {
    if (i >= gram.size()) throw InputError("class index outside the Gram matrix");
  }
}

}  // namespace

std::string_view to_string(MembershipScheme scheme) noexcept {
  switch (scheme) {
    case MembershipScheme::Uniform:
      return "uniform";
    case MembershipScheme::InputSpace:
      return "input_space";
    case MembershipScheme::KernelSpace:
      return "kernel_space";
  }
  return "unknown";
}

MembershipScheme parse_membership_scheme(std::string_view name) {
  if (name == "uniform") return MembershipScheme::Uniform;
  if (name == "input_space") return MembershipScheme::InputSpace;
  if (name == "kernel_space") return MembershipScheme::KernelSpace;
  throw ConfigError("unknown membership scheme '" + std::string(name) + "'");
}

void MembershipSpec::validate() const {
  if (!(theta > 0.0)) throw ConfigError("membership theta must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("membership epsilon must be positive");
  if (!(floor > 0.0 && floor < 1.0)) throw ConfigError("membership floor must lie in (0, 1)");
}

ClassGeometry input_space_geometry(const Dataset& data) {
  data.validate();
  require_both_classes(data.labels, "input-space geometry");
  const std::size_t d = data.dim();
  ClassGeometry g;
  g.center_pos.assign(d, 0.0);
  g.center_neg.assign(d, 0.0);
  const LabelCounts counts = count_labels(data.labels);
  for (std::size_t i = 0; i < data.size(); ++i) {
    Vector& c = data.labels[i] > 0 ? g.center_pos : g.center_neg;
    for (std::size_t k = 0; k < d; ++k) c[k] += data.features[i][k];
  }
  for (std::size_t k = 0; k < d; ++k) {
    g.center_pos[k] /= static_cast<double>(counts.positive);
    g.center_neg[k] /= static_cast<double>(counts.negative);
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int y = data.labels[i];
    const double r = std::sqrt(squared_distance(data.features[i], g.center(y)));
    double& radius = y > 0 ? g.radius_pos : g.radius_neg;
    radius = std::max(radius, r);
  }
  return g;
}

double membership_input(std::span<const double> x, int label, const ClassGeometry& geometry,
                        const MembershipSpec& spec) {
  const Vector& centre = geometry.center(label);
  if (x.size() != centre.size()) throw InputError("sample dimension does not match class geometry");
  const double denom = geometry.radius(label) + spec.theta;
  const double sp = 1.0 - squared_distance(x, centre) / (denom * denom);
  return std::clamp(sp, spec.floor, 1.0);
}

double kernel_radius2_unscaled(std::span<const std::size_t> class_indices, const GramMatrix& gram,
                               std::span<const std::size_t> freq) {
  check_members(class_indices, gram);
  check_freq(freq, gram);
  const KernelCentre c = kernel_centre(class_indices, gram, freq);
  double best = 0.0;
  for (std::size_t i : class_indices) {
    best = std::max(best, distance_to_centre(i, class_indices, gram, freq, c));
  }
  return best;
}

double kernel_radius2(std::span<const std::size_t> class_indices, const GramMatrix& gram,
                      std::span<const std::size_t> freq) {
  const double r2 = kernel_radius2_unscaled(class_indices, gram, freq);
  double n = 0.0;
  for (std::size_t i = 0; i < gram.size(); ++i) n += frequency(freq, i);
  return r2 / (n * n);
}

double kernel_distance2(std::size_t i, std::span<const std::size_t> class_indices,
                        const GramMatrix& gram, std::span<const std::size_t> freq) {
  check_members(class_indices, gram);
  check_freq(freq, gram);
  if (std::find(class_indices.begin(), class_indices.end(), i) == class_indices.end()) {
    throw InputError("sample " + std::to_string(i) + " is not a member of the class");
  }
  return distance_to_centre(i, class_indices, gram, freq, kernel_centre(class_indices, gram, freq));
}

double membership_kernel(std::size_t i, std::span<const int> labels, const GramMatrix& gram,
                         const MembershipSpec& spec, std::span<const std::size_t> freq) {
  if (labels.size() != gram.size()) throw InputError("label count does not match the Gram matrix");
  require_both_classes(labels, "kernel-space membership");
  if (i >= labels.size()) throw InputError("sample index out of range");
  std::vector<std::size_t> members;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == labels[i]) members.push_back(j);
  }
  const double d2 = kernel_distance2(i, members, gram, freq);
  const double r2 = kernel_radius2_unscaled(members, gram, freq);
  return std::clamp(1.0 - std::sqrt(d2 / (r2 + spec.epsilon)), spec.floor, 1.0);
}

std::vector<double> compute_memberships(const Dataset& data, const GramMatrix* gram,
                                        const MembershipSpec& spec,
                                        std::span<const std::size_t> freq) {
  spec.validate();
  data.validate();
  std::vector<double> sp(data.size(), 1.0);
  switch (spec.scheme) {
    case MembershipScheme::Uniform:
      break;
    case MembershipScheme::InputSpace: {
      const ClassGeometry g = input_space_geometry(data);
      for (std::size_t i = 0; i < data.size(); ++i) {
        sp[i] = membership_input(data.features[i], data.labels[i], g, spec);
      }
      break;
    }
    case MembershipScheme::KernelSpace: {
      if (gram == nullptr || gram->size() != data.size()) {
        throw InputError("kernel-space memberships need the training Gram matrix");
      }
      require_both_classes(data.labels, "kernel-space membership");
      check_freq(freq, *gram);
      for (int label : {1, -1}) {
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < data.size(); ++j) {
          if (data.labels[j] == label) members.push_back(j);
        }
        const KernelCentre c = kernel_centre(members, *gram, freq);
        std::vector<double> d2(members.size());
        double r2 = 0.0;
        for (std::size_t k = 0; k < members.size(); ++k) {
          d2[k] = distance_to_centre(members[k], members, *gram, freq, c);
          r2 = std::max(r2, d2[k]);
        }
        for (std::size_t k = 0; k < members.size(); ++k) {
          sp[members[k]] =
              std::clamp(1.0 - std::sqrt(d2[k] / (r2 + spec.epsilon)), spec.floor, 1.0);
        }
      }
      break;
    }
  }
  return sp;
}

}  // namespace hmfsvm
