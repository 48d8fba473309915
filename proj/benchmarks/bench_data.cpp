#include "bench_data.hpp"

#include <random>

namespace hmfsvm::bench {

Dataset blobs(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = i % 2 == 0 ? 1 : -1;
    Vector x(dim);
    for (double& v : x) v = 0.8 * y + noise(rng);
    d.features.push_back(std::move(x));
    d.labels.push_back(y);
  }
  return d;
}

}  // namespace hmfsvm::bench
