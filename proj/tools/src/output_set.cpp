#include "output_set.hpp"

#include <fstream>
#include <system_error>

#include <unistd.h>

#include "hmfsvm/error.hpp"

namespace hmfsvm::cli {
namespace fs = std::filesystem;

void OutputSet::add(fs::path path, std::string contents) {
  for (auto& [p, c] : files_) {
    if (p == path) {
      c = std::move(contents);
      return;
    }
  }
  files_.emplace_back(std::move(path), std::move(contents));
}

void OutputSet::commit() {
  std::vector<fs::path> temps;
  auto discard = [&temps] {
    std::error_code ignored;
    for (const auto& t : temps) fs::remove(t, ignored);
  };
  for (const auto& [path, contents] : files_) {
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) temps.push_back(tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
      discard();
      throw InputError("cannot write '" + path.string() + "'");
    }
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files_[i].first, ec);
    if (ec) {
      discard();
      throw InputError("cannot move output into place at '" + files_[i].first.string() +
                       "': " + ec.message());
    }
  }
  files_.clear();
}

}  // namespace hmfsvm::cli
