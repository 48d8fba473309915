#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace hmfsvm::testing {

Dataset gaussian_blobs(std::size_t per_class, std::size_t dim, double sep, double sd,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  Dataset d;
  for (int cls : {1, -1}) {
    for (std::size_t i = 0; i < per_class; ++i) {
      Vector x(dim);
      for (auto& v : x) v = cls * sep / 2.0 + noise(rng);
      d.features.push_back(std::move(x));
      d.labels.push_back(cls);
    }
  }
  return d;
}

Dataset separable_2d(std::size_t per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d;
  for (int cls : {1, -1}) {
    for (std::size_t i = 0; i < per_class; ++i) {
      d.features.push_back({cls * (1.0 + u(rng)), 2.0 * u(rng) - 1.0});
      d.labels.push_back(cls);
    }
  }
  return d;
}

std::vector<std::size_t> contaminate(Dataset& data, double fraction, double distance,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 0.3);
  std::vector<std::size_t> moved;
  for (int cls : {1, -1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.labels[i] == cls) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto take = static_cast<std::size_t>(fraction * static_cast<double>(members.size()) + 0.5);
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t i = members[k];
      for (auto& v : data.features[i]) v = cls * distance + jitter(rng);
      data.labels[i] = -cls;
      moved.push_back(i);
    }
  }
  std::sort(moved.begin(), moved.end());
  return moved;
}

Dataset xor_square(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Dataset d;
  while (d.size() < n) {
    const double x = u(rng), y = u(rng);
    if (x * y == 0.0) continue;
    d.features.push_back({x, y});
    d.labels.push_back(x * y > 0.0 ? 1 : -1);
  }
  return d;
}

DualInstance random_dual_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(4, 12);
  std::uniform_int_distribution<std::size_t> dims(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DualInstance inst;
  const std::size_t n = size(rng);
  const std::size_t d = dims(rng);
  for (std::size_t i = 0; i < n; ++i) {
    inst.points.push_back(uniform_values(d, -1.5, 1.5, rng));
    inst.labels.push_back(unit(rng) < 0.5 ? 1 : -1);
    inst.memberships.push_back(0.1 + 0.9 * unit(rng));
  }
  inst.labels[0] = 1;
  inst.labels[1] = -1;
  inst.kernel = unit(rng) < 0.5 ? KernelSpec{KernelFamily::Linear, 1.0, 0.0}
                                : KernelSpec{KernelFamily::Rbf, 0.2 + 2.0 * unit(rng), 0.0};
  inst.config.C = std::exp2(-2.0 + 6.0 * unit(rng));
  inst.config.costs = {0.5 + unit(rng), 0.5 + unit(rng)};
  inst.config.tol = 1e-10;
  return inst;
}

std::vector<double> uniform_values(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("hmfsvm-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::filesystem::path data_dir() { return HMFSVM_DATA_DIR; }

}  // namespace hmfsvm::testing
