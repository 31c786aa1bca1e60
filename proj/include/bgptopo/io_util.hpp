#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace bgptopo {

/// Shortest stable decimal form, 12 significant digits.
std::string format_double(double value);

/// Writes to <path>.tmp and renames into place on commit, so partial
/// output never lands under the final name.
class AtomicFileWriter {
 public:
  explicit AtomicFileWriter(const std::filesystem::path& path);
  ~AtomicFileWriter();

  std::ofstream& stream() { return out_; }
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

}  // namespace bgptopo
