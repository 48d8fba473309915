#include "hmfsvm/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hmfsvm/error.hpp"
#include "hmfsvm/text_io.hpp"

namespace hmfsvm {

std::size_t Codebook::nearest(std::span<const double> x) const {
  if (prototypes.empty()) throw StateError("empty codebook");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < prototypes.size(); ++u) {
    if (prototypes[u].size() != x.size()) throw InputError("vector dimension does not match codebook");
    const double d = squared_distance(x, prototypes[u]);
    if (d < best_d) {
      best_d = d;
      best = u;
    }
  }
  return best;
}

void Codebook::write(TokenWriter& out) const {
  out.word("codebook").integer(static_cast<std::int64_t>(prototypes.size())).real(distortion).newline();
  for (const auto& p : prototypes) out.reals(p).newline();
}

Codebook Codebook::read(TokenReader& in) {
  Codebook c;
  in.expect("codebook");
  const std::size_t m = in.count();
  c.distortion = in.real();
  for (std::size_t u = 0; u < m; ++u) c.prototypes.push_back(in.reals());
  return c;
}

std::size_t count_distinct(const std::vector<Vector>& vectors) {
  std::vector<Vector> sorted = vectors;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

Codebook quantize(const std::vector<Vector>& vectors, std::size_t m, std::uint64_t seed,
                  std::size_t max_iterations) {
  if (vectors.empty()) throw InputError("cannot quantize an empty vector set");
  const std::size_t d = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != d) throw InputError("quantizer input has mixed dimensions");
  }
  const std::size_t distinct = count_distinct(vectors);
  if (m == 0 || m > distinct) {
    throw ConfigError("codebook size " + std::to_string(m) + " must lie in [1, " +
                      std::to_string(distinct) + "] (distinct input vectors)");
  }
  const std::size_t n = vectors.size();

  Codebook book;
  std::mt19937_64 rng(seed);
  const std::size_t first = static_cast<std::size_t>(rng() % n);
  book.prototypes.push_back(vectors[first]);
  std::vector<double> min_d(n);
  for (std::size_t i = 0; i < n; ++i) min_d[i] = squared_distance(vectors[i], vectors[first]);
  while (book.prototypes.size() < m) {
    const std::size_t far =
        static_cast<std::size_t>(std::max_element(min_d.begin(), min_d.end()) - min_d.begin());
    book.prototypes.push_back(vectors[far]);
    for (std::size_t i = 0; i < n; ++i) {
      min_d[i] = std::min(min_d[i], squared_distance(vectors[i], vectors[far]));
    }
  }

  std::vector<std::size_t> assignment(n, m);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t u = book.nearest(vectors[i]);
      if (u != assignment[i]) {
        assignment[i] = u;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<Vector> sums(m, Vector(d, 0.0));
    std::vector<std::size_t> counts(m, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[assignment[i]];
      for (std::size_t k = 0; k < d; ++k) sums[assignment[i]][k] += vectors[i][k];
    }
    for (std::size_t u = 0; u < m; ++u) {
      if (counts[u] == 0) continue;
      for (std::size_t k = 0; k < d; ++k) {
        book.prototypes[u][k] = sums[u][k] / static_cast<double>(counts[u]);
      }
    }
  }

  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sse += squared_distance(vectors[i], book.prototypes[book.nearest(vectors[i])]);
  }
  book.distortion = sse / static_cast<double>(n);
  return book;
}

}  // namespace hmfsvm
