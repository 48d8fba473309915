#include "hmfsvm/text_io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "hmfsvm/error.hpp"

namespace hmfsvm {
namespace {

std::string escape(std::string_view w) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  if (w.empty()) return "%";
  std::string out;
  for (unsigned char ch : w) {
    if (ch <= ' ' || ch == '%' || ch >= 0x7f) {
      out += '%';
      out += kHex[ch >> 4];
      out += kHex[ch & 0xf];
    } else {
      out += static_cast<char>(ch);
    }
  }
  return out;
}

std::string unescape(const std::string& w) {
  if (w == "%") return {};
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == '%' && i + 2 < w.size()) {
      out += static_cast<char>(std::stoi(w.substr(i + 1, 2), nullptr, 16));
      i += 2;
    } else {
      out += w[i];
    }
  }
  return out;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", value);
  return buf;
}

double parse_real(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw InputError("expected a number, found an empty token");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw InputError("malformed number '" + s + "'");
  return v;
}

TokenWriter& TokenWriter::word(std::string_view w) {
  if (!line_start_) out_ << ' ';
  out_ << escape(w);
  line_start_ = false;
  return *this;
}

TokenWriter& TokenWriter::real(double v) {
  if (!line_start_) out_ << ' ';
  out_ << format_real(v);
  line_start_ = false;
  return *this;
}

TokenWriter& TokenWriter::integer(std::int64_t v) {
  if (!line_start_) out_ << ' ';
  out_ << v;
  line_start_ = false;
  return *this;
}

TokenWriter& TokenWriter::reals(const std::vector<double>& v) {
  integer(static_cast<std::int64_t>(v.size()));
  for (double x : v) real(x);
  return *this;
}

void TokenWriter::newline() {
  out_ << '\n';
  line_start_ = true;
}

std::string TokenReader::raw() {
  std::string w;
  if (!(in_ >> w)) throw InputError("unexpected end of model document");
  return w;
}

std::string TokenReader::word() { return unescape(raw()); }

double TokenReader::real() { return parse_real(raw()); }

std::int64_t TokenReader::integer() {
  const std::string w = raw();
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc{} || ptr != w.data() + w.size()) {
    throw InputError("malformed integer '" + w + "'");
  }
  return v;
}

std::size_t TokenReader::count() {
  const std::int64_t v = integer();
  if (v < 0) throw InputError("negative count in model document");
  return static_cast<std::size_t>(v);
}

std::vector<double> TokenReader::reals() {
  const std::size_t n = count();
  std::vector<double> v(n);
  for (auto& x : v) x = real();
  return v;
}

void TokenReader::expect(std::string_view keyword) {
  const std::string w = raw();
  if (w != keyword) {
    throw InputError("model document: expected '" + std::string(keyword) + "', found '" + w + "'");
  }
}

void TokenReader::expect_header(std::string_view schema, std::int64_t version) {
  const std::string found_schema = raw();
  if (found_schema != schema) {
    throw InputError("document schema is '" + found_schema + "', expected '" +
                     std::string(schema) + "'");
  }
  const std::int64_t found_version = integer();
  if (found_version != version) {
    throw InputError("document '" + std::string(schema) + "' has version " +
                     std::to_string(found_version) + " but this build reads version " +
                     std::to_string(version));
  }
}

}  // namespace hmfsvm
