#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "tdcorpus/config.h"

namespace fixtures {

inline std::filesystem::path data(const std::string& name) {
  return std::filesystem::path(TDCORPUS_TEST_DATA) / name;
}

inline std::filesystem::path bundled() { return tdcorpus::default_data_dir(); }

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("tdcorpus-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
