#include "vche/config.hpp"

#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>

namespace vche {

namespace {

std::string trim(const std::string& s) {
  const std::size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const std::size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void ConfigMap::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool ConfigMap::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

Real ConfigMap::get_real(const std::string& key, Real fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::size_t used = 0;
  Real parsed = 0.0;
  try {
    parsed = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size() || it->second.empty()) {
    throw std::invalid_argument("config key '" + key + "': cannot parse '" +
                                it->second + "' as a number");
  }
  return parsed;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::size_t used = 0;
  long parsed = 0;
  try {
    parsed = std::stol(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size() || it->second.empty() ||
      parsed != static_cast<int>(parsed)) {
    throw std::invalid_argument("config key '" + key + "': cannot parse '" +
                                it->second + "' as an integer");
  }
  return static_cast<int>(parsed);
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file '" + path + "'");
  }
  ConfigMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    const std::string key = eq == std::string::npos ? "" : trim(body.substr(0, eq));
    if (key.empty()) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    out.set(key, trim(body.substr(eq + 1)));
  }
  return out;
}

void apply_override(ConfigMap& config, const std::string& assignment) {
  std::string body = assignment;
  if (body.rfind("--", 0) == 0) body = body.substr(2);
  const std::size_t eq = body.find('=');
  const std::string key = eq == std::string::npos ? "" : trim(body.substr(0, eq));
  if (key.empty()) {
    throw std::invalid_argument("override '" + assignment +
                                "' is not of the form key=value");
  }
  config.set(key, trim(body.substr(eq + 1)));
}

}  // namespace vche
