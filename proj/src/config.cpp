#include "tdcorpus/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tdcorpus/error.h"
#include "tdcorpus/text.h"

namespace tdcorpus {

namespace {

void flatten(const boost::property_tree::ptree& tree, const std::string& prefix,
             Config& out) {
  for (const auto& [key, child] : tree) {
    const std::string full = prefix.empty() ? key : prefix + "." + key;
    if (child.empty()) {
      out.set(full, child.data());
    } else {
      flatten(child, full, out);
    }
  }
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  try {
    return parse(buf.str(), dir);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Config Config::parse(std::string_view ini_text, std::filesystem::path base_dir) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(ini_text)};
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  Config cfg;
  cfg.base_dir_ = std::move(base_dir);
  flatten(tree, "", cfg);
  return cfg;
}

bool Config::has(std::string_view key) const { return values_.count(key) > 0; }

std::optional<std::string> Config::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_or(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

double Config::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  double out = 0;
  const auto s = text::trim(*v);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + *v + "'");
  }
  return out;
}

long long Config::get_int(std::string_view key, long long fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  long long out = 0;
  const auto s = text::trim(*v);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + *v + "'");
  }
  return out;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  const std::string s = text::fold_case(text::trim(*v));
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw ConfigError(std::string(key) + ": expected a boolean, got '" + *v + "'");
}

std::optional<std::filesystem::path> Config::get_path(std::string_view key) const {
  auto v = get(key);
  if (!v || text::trim(*v).empty()) return std::nullopt;
  std::filesystem::path p{std::string(text::trim(*v))};
  if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
  return p;
}

std::vector<std::string> Config::keys(std::string_view section) const {
  std::vector<std::string> out;
  const std::string prefix = std::string(section) + ".";
  for (auto it = values_.lower_bound(prefix);
       it != values_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
       ++it) {
    out.push_back(it->first.substr(prefix.size()));
  }
  return out;
}

void Config::set(std::string key, std::string value) {
  values_[std::move(key)] = std::move(value);
}

}  // namespace tdcorpus

namespace tdcorpus {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("TDCORPUS_DATA_DIR"); env && *env) return env;
  return TDCORPUS_DATA_DIR;
}

}  // namespace tdcorpus
