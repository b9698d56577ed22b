#include "cxr/core/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "cxr/common.hpp"

namespace cxr::config {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

void check_key(const std::string& key, const std::string& where) {
  require(!key.empty(), Err::config, where + ": empty key");
  for (char c : key) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
    require(ok, Err::config, where + ": bad character in key '" + key + "'");
  }
  require(key.front() != '.' && key.back() != '.', Err::config,
          where + ": key may not start or end with '.': " + key);
}

}  // namespace

Config Config::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), Err::io, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path.string());
}

Config Config::parse_text(const std::string& text, const std::string& source) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, Err::config, where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    check_key(key, where);
    require(cfg.values_.emplace(key, value).second, Err::config,
            where + ": duplicate key '" + key + "'");
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  check_key(key, "<override>");
  values_[key] = value;
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos, Err::config,
          "override must look like key=value: " + assignment);
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string Config::get_str(const std::string& key) const {
  const auto it = values_.find(key);
  require(it != values_.end(), Err::config, "missing required config key '" + key + "'");
  return it->second;
}

std::string Config::get_str(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_f64(const std::string& key) const {
  const std::string v = get_str(key);
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    require(used == v.size(), Err::config, "trailing characters in number for '" + key + "'");
    return d;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Err::config, "config key '" + key + "' is not a number: " + v);
  }
}

double Config::get_f64(const std::string& key, double fallback) const {
  return has(key) ? get_f64(key) : fallback;
}

int64_t Config::get_i64(const std::string& key) const {
  const std::string v = get_str(key);
  int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(ec == std::errc{} && ptr == v.data() + v.size(), Err::config,
          "config key '" + key + "' is not an integer: " + v);
  return out;
}

int64_t Config::get_i64(const std::string& key, int64_t fallback) const {
  return has(key) ? get_i64(key) : fallback;
}

bool Config::get_bool(const std::string& key) const {
  const std::string v = get_str(key);
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  fail(Err::config, "config key '" + key + "' is not a boolean: " + v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

}  // namespace cxr::config
