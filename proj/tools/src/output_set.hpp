#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace hmfsvm::cli {

// Output files staged in memory and published together. Each file is written
// to a temporary sibling and renamed into place only after every temporary
// has been written, so a failing command leaves no partial output behind.
class OutputSet {
 public:
  void add(std::filesystem::path path, std::string contents);
  bool empty() const noexcept { return files_.empty(); }

  // Throws InputError if a file cannot be written; nothing is renamed then.
  void commit();

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

}  // namespace hmfsvm::cli
