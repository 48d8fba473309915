#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hmfsvm {

// Lossless text form of a double ("%a" hex float, e.g. 0x1.8p+1).
std::string format_real(double value);
// Accepts hex floats, decimal floats, inf and nan; throws InputError otherwise.
double parse_real(std::string_view text);

/// Whitespace-separated token writer used by every model document. Reals are
/// written as hex floats so a write/read cycle reproduces them bit for bit.
/// Words are percent-escaped so they never contain whitespace.
class TokenWriter {
 public:
  explicit TokenWriter(std::ostream& out) : out_(out) {}

  TokenWriter& word(std::string_view w);
  TokenWriter& real(double v);
  TokenWriter& integer(std::int64_t v);
  TokenWriter& reals(const std::vector<double>& v);  // count followed by values
  void newline();

 private:
  std::ostream& out_;
  bool line_start_ = true;
};

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string word();
  double real();
  std::int64_t integer();
  std::size_t count();
  std::vector<double> reals();
  // Reads a word and throws InputError unless it equals `keyword`.
  void expect(std::string_view keyword);
  // Reads "<schema> <version>" and throws InputError naming both versions on
  // a mismatch.
  void expect_header(std::string_view schema, std::int64_t version);

 private:
  std::string raw();
  std::istream& in_;
};

}  // namespace hmfsvm
