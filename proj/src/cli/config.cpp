#include "flucto/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace flucto::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    out.push_back(trim(item));
  }
  if (!s.empty() && s.back() == sep) {
    out.emplace_back();
  }
  return out;
}

std::optional<double> to_real(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    return std::nullopt;
  }
  return v;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_';
  });
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') {
      continue;
    }
    const auto eq = body.find('=');
    const std::string place = source + ":" + std::to_string(number);
    if (eq == std::string::npos) {
      throw ConfigError(place + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    if (!valid_key(key)) {
      throw ConfigError(place + ": invalid key '" + key + "'");
    }
    if (cfg.values_.count(key) != 0) {
      throw ConfigError(place + ": duplicate key " + key);
    }
    cfg.values_[key] = trim(body.substr(eq + 1));
    cfg.origin_[key] = place;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file " + path);
  }
  return parse(in, path);
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("--set " + assignment + ": expected key=value");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) {
    throw ConfigError("--set: invalid key '" + key + "'");
  }
  values_[key] = value;
  origin_[key] = "--set";
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::where(const std::string& key) const {
  const auto it = origin_.find(key);
  return it == origin_.end() ? key : it->second + ": " + key;
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError(key + ": required key is missing");
  }
  return it->second;
}

double Config::real(const std::string& key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

double Config::real(const std::string& key) const {
  const std::string raw = text(key);
  const auto v = to_real(raw);
  if (!v || !std::isfinite(*v)) {
    throw ConfigError(where(key) + ": expected a finite number, got '" + raw + "'");
  }
  return *v;
}

std::int64_t Config::integer(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) {
    return fallback;
  }
  const std::string raw = text(key);
  std::int64_t v = 0;
  const char* end = raw.data() + raw.size();
  auto [ptr, ec] = std::from_chars(raw.data(), end, v);
  if (ec != std::errc() || ptr != end || raw.empty()) {
    // Accept integral values written as reals, e.g. 1e6.
    const auto r = to_real(raw);
    if (!r || std::floor(*r) != *r || std::abs(*r) > 9e18) {
      throw ConfigError(where(key) + ": expected an integer, got '" + raw + "'");
    }
    return static_cast<std::int64_t>(*r);
  }
  return v;
}

std::uint64_t Config::count(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) {
    return fallback;
  }
  const std::int64_t v = integer(key, 0);
  if (v < 0) {
    throw ConfigError(where(key) + ": must not be negative");
  }
  return static_cast<std::uint64_t>(v);
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) {
    return fallback;
  }
  const std::string raw = text(key);
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  throw ConfigError(where(key) + ": expected true or false, got '" + raw + "'");
}

std::vector<double> parse_grid(const std::string& text, const std::string& key) {
  if (text.rfind("lin:", 0) == 0 || text.rfind("log:", 0) == 0) {
    const auto parts = split(text, ':');
    if (parts.size() != 4) {
      throw ConfigError(key + ": grid must be lin:a:b:n or log:a:b:n");
    }
    const auto a = to_real(parts[1]);
    const auto b = to_real(parts[2]);
    const auto n = to_real(parts[3]);
    if (!a || !b || !n || *n < 1 || std::floor(*n) != *n) {
      throw ConfigError(key + ": bad grid '" + text + "'");
    }
    const bool log = parts[0] == "log";
    if (log && !(*a > 0.0 && *b > 0.0)) {
      throw ConfigError(key + ": log grid needs positive end points");
    }
    const int count = static_cast<int>(*n);
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      out.push_back(log ? std::exp(std::log(*a) + f * (std::log(*b) - std::log(*a)))
                        : *a + f * (*b - *a));
    }
    // Pin the end points against rounding.
    out.back() = count == 1 ? *a : *b;
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    const auto v = to_real(item);
    if (!v || !std::isfinite(*v)) {
      throw ConfigError(key + ": expected a number, got '" + item + "'");
    }
    out.push_back(*v);
  }
  if (out.empty()) {
    throw ConfigError(key + ": empty list");
  }
  return out;
}

std::vector<double> Config::reals(const std::string& key) const {
  return parse_grid(text(key), where(key));
}

std::vector<std::string> Config::words(const std::string& key) const {
  auto out = split(text(key), ',');
  for (const auto& w : out) {
    if (w.empty()) {
      throw ConfigError(where(key) + ": empty list entry");
    }
  }
  return out;
}

void Config::check_known(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    const bool ok = std::any_of(known.begin(), known.end(), [&](const std::string& k) {
      if (!k.empty() && k.back() == '*') {
        return key.rfind(k.substr(0, k.size() - 1), 0) == 0;
      }
      return k == key;
    });
    if (!ok) {
      throw ConfigError(where(key) + ": unknown key");
    }
  }
}

}  // namespace flucto::cli
