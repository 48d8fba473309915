#pragma once

#include <cstddef>
#include <cstdint>

#include "hmfsvm/dataset.hpp"

namespace hmfsvm::bench {

// Two overlapping Gaussian classes of n/2 samples each in `dim` dimensions.
Dataset blobs(std::size_t n, std::size_t dim, std::uint64_t seed);

}  // namespace hmfsvm::bench
