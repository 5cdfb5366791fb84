#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tdcorpus {

/// Flat view of an INI-style `key = value` file. Keys inside a `[section]`
/// are addressed as "section.key". Relative paths resolve against the
/// directory holding the file.
class Config {
 public:
  Config() = default;

  static Config load(const std::filesystem::path& path);
  static Config parse(std::string_view ini_text,
                      std::filesystem::path base_dir = {});

  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  /// Resolved path value, or nullopt when the key is absent or empty.
  std::optional<std::filesystem::path> get_path(std::string_view key) const;

  /// Keys (without the section prefix) defined under `section`.
  std::vector<std::string> keys(std::string_view section) const;

  void set(std::string key, std::string value);
  const std::filesystem::path& base_dir() const { return base_dir_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::filesystem::path base_dir_;
};

}  // namespace tdcorpus

namespace tdcorpus {

/// Directory of the bundled data files: $TDCORPUS_DATA_DIR when set,
/// otherwise the location baked in at build time.
std::filesystem::path default_data_dir();

}  // namespace tdcorpus
