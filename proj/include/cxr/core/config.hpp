#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace cxr::config {

// Flat dotted-key configuration: one `key = value` per line, `#` comments.
// Duplicate keys within one source are rejected; set() overrides freely
// (command-line precedence).
class Config {
 public:
  static Config parse_file(const std::filesystem::path& path);
  static Config parse_text(const std::string& text, const std::string& source = "<inline>");

  void set(const std::string& key, const std::string& value);
  // Merge overrides from strings of the form "key=value".
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_str(const std::string& key) const;
  std::string get_str(const std::string& key, const std::string& fallback) const;
  double get_f64(const std::string& key) const;
  double get_f64(const std::string& key, double fallback) const;
  int64_t get_i64(const std::string& key) const;
  int64_t get_i64(const std::string& key, int64_t fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace cxr::config
