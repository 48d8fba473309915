#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hmfsvm/dataset.hpp"
#include "hmfsvm/kernel.hpp"

namespace hmfsvm {

// uniform gives every sample membership 1 (plain C-SVM). input_space is the
// FSVM rule built on class means and radii; kernel_space is the MFSVM rule
// built on implicit class centres in the kernel feature space.
enum class MembershipScheme { Uniform, InputSpace, KernelSpace };

std::string_view to_string(MembershipScheme scheme) noexcept;
MembershipScheme parse_membership_scheme(std::string_view name);

struct MembershipSpec {
  MembershipScheme scheme = MembershipScheme::KernelSpace;
  double theta = 0.1;     // radius offset of the input-space rule
  double epsilon = 1e-3;  // keeps the kernel-space rule away from zero
  double floor = 1e-3;    // lower clamp for every membership

  void validate() const;

  friend bool operator==(const MembershipSpec&, const MembershipSpec&) = default;
};

/// Explicit input-space class geometry: per-class mean and the largest
/// distance from that mean to a member.
struct ClassGeometry {
  Vector center_pos;
  Vector center_neg;
  double radius_pos = 0.0;
  double radius_neg = 0.0;

  const Vector& center(int label) const noexcept { return label > 0 ? center_pos : center_neg; }
  double radius(int label) const noexcept { return label > 0 ? radius_pos : radius_neg; }
};

ClassGeometry input_space_geometry(const Dataset& data);

/// 1 - |mean_y - x|^2 / (radius_y + theta)^2, clamped to [floor, 1].
double membership_input(std::span<const double> x, int label, const ClassGeometry& geometry,
                        const MembershipSpec& spec);

/// Squared kernel-space radius of a class,
///
///   max_{s in class} [K(s,s) - 2/m sum_i f_i K(x_i,s) + 1/m^2 sum_ij f_i f_j K(x_i,x_j)] / n^2
///
/// where m is the summed frequency of the class and n the summed frequency of
/// every sample covered by `freq`. An empty `freq` means unit frequencies over
/// the whole Gram matrix.
double kernel_radius2(std::span<const std::size_t> class_indices, const GramMatrix& gram,
                      std::span<const std::size_t> freq = {});

/// Same maximum without the 1/n^2 factor. This is the radius the kernel-space
/// membership compares distances against.
double kernel_radius2_unscaled(std::span<const std::size_t> class_indices, const GramMatrix& gram,
                               std::span<const std::size_t> freq = {});

/// Squared feature-space distance between sample i and its class centre.
/// Slightly negative values (round-off, indefinite kernels) are clamped to 0.
double kernel_distance2(std::size_t i, std::span<const std::size_t> class_indices,
                        const GramMatrix& gram, std::span<const std::size_t> freq = {});

/// 1 - sqrt(d_i^2 / (r_y^2 + epsilon)), clamped to [floor, 1].
double membership_kernel(std::size_t i, std::span<const int> labels, const GramMatrix& gram,
                         const MembershipSpec& spec, std::span<const std::size_t> freq = {});

/// Memberships for every sample under `spec`. `gram` is required for the
/// kernel-space scheme and ignored otherwise. O(n^2) for the kernel scheme.
std::vector<double> compute_memberships(const Dataset& data, const GramMatrix* gram,
                                        const MembershipSpec& spec,
                                        std::span<const std::size_t> freq = {});

}  // namespace hmfsvm
