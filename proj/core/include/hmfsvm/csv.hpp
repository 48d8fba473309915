#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hmfsvm {

// RFC 4180-style table: first record is the header, quoted fields may hold
// commas, quotes ("") and newlines. Rows keep whatever field count they have.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line where each row starts

  // Column index by exact header name, or npos.
  std::size_t column(std::string_view name) const noexcept;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

CsvTable read_csv(std::istream& in);
// Throws InputError if the file cannot be opened.
CsvTable read_csv_file(const std::filesystem::path& path);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest decimal text that parses back to the same double.
std::string format_decimal(double value);

std::string trim(std::string_view s);

}  // namespace hmfsvm
