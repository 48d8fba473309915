#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hmfsvm/dataset.hpp"
#include "hmfsvm/kernel.hpp"
#include "hmfsvm/solver.hpp"

namespace hmfsvm::testing {

// Two isotropic Gaussian blobs centred at -sep/2 and +sep/2 along every axis.
Dataset gaussian_blobs(std::size_t per_class, std::size_t dim, double sep, double sd,
                       std::uint64_t seed);

// Linearly separable 2-D clusters with a clear gap along x.
Dataset separable_2d(std::size_t per_class, std::uint64_t seed);

// Flips the label of `fraction` of each class and pushes those points to
// +-distance on every axis, deep inside the region of their old class. The
// flipped indices are returned.
std::vector<std::size_t> contaminate(Dataset& data, double fraction, double distance,
                                     std::uint64_t seed);

// Points in [-1, 1]^2 labelled by the sign of x * y.
Dataset xor_square(std::size_t n, std::uint64_t seed);

// Small random dual problem with a positive semidefinite kernel (linear or
// rbf), 4..12 points in 1..4 dimensions, memberships in [0.1, 1] and both
// classes present.
struct DualInstance {
  std::vector<Vector> points;
  std::vector<int> labels;
  std::vector<double> memberships;
  KernelSpec kernel;
  SolverConfig config;
};
DualInstance random_dual_instance(std::uint64_t seed);

// Uniform values in [lo, hi].
std::vector<double> uniform_values(std::size_t n, double lo, double hi, std::mt19937_64& rng);

// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

// Directory holding the bundled data files.
std::filesystem::path data_dir();

}  // namespace hmfsvm::testing
