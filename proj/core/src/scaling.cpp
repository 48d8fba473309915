#include "hmfsvm/scaling.hpp"

#include <cmath>

#include "hmfsvm/error.hpp"
#include "hmfsvm/text_io.hpp"

namespace hmfsvm {

Standardizer Standardizer::fit(const std::vector<Vector>& rows) {
  if (rows.empty()) throw InputError("cannot fit a standardizer on zero rows");
  const std::size_t d = rows.front().size();
  Standardizer s;
  s.mean_.assign(d, 0.0);
  s.scale_.assign(d, 0.0);
  for (const auto& r : rows) {
    if (r.size() != d) throw InputError("standardizer rows have mixed dimensions");
    for (std::size_t k = 0; k < d; ++k) s.mean_[k] += r[k];
  }
  const double n = static_cast<double>(rows.size());
  for (auto& m : s.mean_) m /= n;
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < d; ++k) {
      const double dev = r[k] - s.mean_[k];
      s.scale_[k] += dev * dev;
    }
  }
  for (auto& v : s.scale_) {
    v = std::sqrt(v / n);
    if (!(v > 1e-12)) v = 1.0;
  }
  return s;
}

Vector Standardizer::transform(const Vector& row) const {
  if (row.size() != mean_.size()) {
    throw InputError("row dimension " + std::to_string(row.size()) +
                     " does not match standardizer dimension " + std::to_string(mean_.size()));
  }
  Vector out(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) out[k] = (row[k] - mean_[k]) / scale_[k];
  return out;
}

std::vector<Vector> Standardizer::transform(const std::vector<Vector>& rows) const {
  std::vector<Vector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(transform(r));
  return out;
}

void Standardizer::write(TokenWriter& out) const {
  out.word("standardizer").newline();
  out.word("mean").reals(mean_).newline();
  out.word("scale").reals(scale_).newline();
}

Standardizer Standardizer::read(TokenReader& in) {
  Standardizer s;
  in.expect("standardizer");
  in.expect("mean");
  s.mean_ = in.reals();
  in.expect("scale");
  s.scale_ = in.reals();
  if (s.mean_.size() != s.scale_.size()) throw InputError("standardizer mean/scale length mismatch");
  return s;
}

}  // namespace hmfsvm
