#pragma once

/// Flat key = value configuration with command-line overrides.
///
/// Configuration is deliberately format-free: a text file of `key = value`
/// lines (# comments, blank lines ignored) plus `--key=value` overrides.
/// Values stay strings until an experiment asks for a typed view, so the
/// report can echo exactly what was supplied.

#include <map>
#include <string>

#include "vche/field.hpp"

namespace vche {

class ConfigMap {
 public:
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  /// Typed accessors fall back to `fallback` when the key is absent and
  /// throw std::invalid_argument (naming the key and the offending text)
  /// when the stored value does not parse.
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  Real get_real(const std::string& key, Real fallback) const;
  int get_int(const std::string& key, int fallback) const;

  /// Sorted view of every entry, for deterministic echoing.
  const std::map<std::string, std::string>& entries() const {
    return values_;
  }

 private:
  std::map<std::string, std::string> values_;
};

/// Parse a flat config file. Lines are `key = value` (spaces optional),
/// `# comment`, or blank. Throws std::invalid_argument naming the file and
/// line number on anything else; later duplicates overwrite earlier ones.
ConfigMap load_config_file(const std::string& path);

/// Apply one `key=value` or `--key=value` override. Throws
/// std::invalid_argument when the assignment has no '=' or an empty key.
void apply_override(ConfigMap& config, const std::string& assignment);

}  // namespace vche
