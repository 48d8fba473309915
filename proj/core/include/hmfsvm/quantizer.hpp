#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hmfsvm/dataset.hpp"

namespace hmfsvm {

class TokenReader;
class TokenWriter;

/// Prototype set produced by `quantize`.
struct Codebook {
  std::vector<Vector> prototypes;
  double distortion = 0.0;  // mean squared quantisation error on the fitting set

  std::size_t size() const noexcept { return prototypes.size(); }
  // Index of the closest prototype; ties go to the lowest index.
  std::size_t nearest(std::span<const double> x) const;

  void write(TokenWriter& out) const;
  static Codebook read(TokenReader& in);

  friend bool operator==(const Codebook&, const Codebook&) = default;
};

std::size_t count_distinct(const std::vector<Vector>& vectors);

/// Lloyd iterations from a seeded farthest-point start: the seed picks the
/// first prototype, then each next prototype is the vector farthest from all
/// chosen ones (lowest index on ties). Empty cells keep their prototype.
/// Throws ConfigError if m is 0 or exceeds the number of distinct vectors.
Codebook quantize(const std::vector<Vector>& vectors, std::size_t m, std::uint64_t seed,
                  std::size_t max_iterations = 100);

}  // namespace hmfsvm
