#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bllab/battery.hpp"
#include "bllab/measures.hpp"

namespace bllab {

/// INI-style configuration: [section] headers, key = value lines,
/// '#' or ';' comments. Keys are addressed as "section.key".
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key,
                               std::vector<double> fallback) const;
  void set(const std::string& key, const std::string& value);

  /// Sorted "key = value" dump used for hashing and reproducibility stamps.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> kv_;
};

/// Parse a measure spec string, e.g. "gaussian:a=1",
/// "power:p=1.5,r=0.1", "power:p=2,r=0,half_line". The measure section of a
/// config file provides the same keys (kind, a, p, r, half_line, tol, level).
Measure measure_from_string(const std::string& spec, int level_override = 0);
Measure measure_from_config(const Config& cfg, int level_override = 0);

BatterySpec battery_from_config(const Config& cfg);

}  // namespace bllab
