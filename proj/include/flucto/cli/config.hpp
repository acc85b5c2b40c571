#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flucto::cli {

/// Bad or missing configuration. The message names the offending key and,
/// for file input, the line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat key = value settings with dotted keys. Lines starting with '#' are
/// comments. Later sources (--set) override earlier ones (the file).
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::string& path);

  /// Applies "key=value"; throws ConfigError when there is no '='.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::string text(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const;
  bool flag(const std::string& key, bool fallback) const;

  /// Comma list of reals, or lin:a:b:n / log:a:b:n for n evenly spaced points.
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  /// Throws ConfigError naming the first key not in `known`. A known entry
  /// ending in '*' matches any key with that prefix.
  void check_known(const std::vector<std::string>& known) const;

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

 private:
  std::string where(const std::string& key) const;

  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> origin_;
};

/// Parses a grid description as used by Config::reals.
std::vector<double> parse_grid(const std::string& text, const std::string& key);

}  // namespace flucto::cli
