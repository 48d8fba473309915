#pragma once

#include <vector>

#include "hmfsvm/dataset.hpp"

namespace hmfsvm {

class TokenReader;
class TokenWriter;

// Per-column z-score standardisation. Columns with zero spread are centred
// but not rescaled.
class Standardizer {
 public:
  Standardizer() = default;

  static Standardizer fit(const std::vector<Vector>& rows);

  Vector transform(const Vector& row) const;
  std::vector<Vector> transform(const std::vector<Vector>& rows) const;

  std::size_t dim() const noexcept { return mean_.size(); }
  const Vector& mean() const noexcept { return mean_; }
  const Vector& scale() const noexcept { return scale_; }

  void write(TokenWriter& out) const;
  static Standardizer read(TokenReader& in);

  friend bool operator==(const Standardizer&, const Standardizer&) = default;

 private:
  Vector mean_;
  Vector scale_;
};

}  // namespace hmfsvm
