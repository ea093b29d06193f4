#include "bllab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "bllab/errors.hpp"

namespace bllab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("bad section header at line " + std::to_string(lineno));
      section = lower(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    std::string key = lower(trim(line.substr(0, eq)));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key at line " + std::to_string(lineno));
    cfg.kv_[section.empty() ? key : section + "." + key] = val;
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return kv_.count(lower(key)) > 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(lower(key));
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(lower(key));
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' is not a number: " + it->second);
  }
}

int Config::get_int(const std::string& key, int fallback) const {
  auto it = kv_.find(lower(key));
  if (it == kv_.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' is not an integer: " + it->second);
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = kv_.find(lower(key));
  if (it == kv_.end()) return fallback;
  std::string v = lower(it->second);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "' is not a boolean: " + it->second);
}

std::vector<double> Config::get_list(const std::string& key,
                                     std::vector<double> fallback) const {
  auto it = kv_.find(lower(key));
  if (it == kv_.end()) return fallback;
  // An explicitly empty value is a valid empty list (reports then emit a
  // header-only CSV and no plot).
  std::vector<double> out;
  std::istringstream in(it->second);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "' has a bad list entry: " + tok);
    }
  }
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  kv_[lower(key)] = value;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
  return out;
}

namespace {

Measure build_measure(const std::string& kind, double a, double p, double r,
                      bool half_line, double tol, int level) {
  Potential pot = [&] {
    if (kind == "gaussian") return Potential::gaussian(a);
    if (kind == "power") return Potential::power(p, r);
    throw ConfigError("unknown measure kind: " + kind);
  }();
  return Measure(std::move(pot), tol, half_line, level);
}

}  // namespace

Measure measure_from_string(const std::string& spec, int level_override) {
  std::string kind = spec;
  std::string args;
  std::size_t colon = spec.find(':');
  if (colon != std::string::npos) {
    kind = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  }
  kind = lower(trim(kind));
  double a = 1.0, p = 2.0, r = 0.0, tol = 1e-12;
  bool half_line = false;
  int level = Measure::kDefaultLevel;
  std::istringstream in(args);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    if (lower(tok) == "half_line") {
      half_line = true;
      continue;
    }
    std::size_t eq = tok.find('=');
    if (eq == std::string::npos)
      throw ConfigError("bad measure argument: " + tok);
    std::string key = lower(trim(tok.substr(0, eq)));
    double val = 0.0;
    try {
      val = std::stod(tok.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad measure argument: " + tok);
    }
    if (key == "a") a = val;
    else if (key == "p") p = val;
    else if (key == "r") r = val;
    else if (key == "tol") tol = val;
    else if (key == "level") level = static_cast<int>(val);
    else if (key == "half_line") half_line = val != 0.0;
    else throw ConfigError("unknown measure key: " + key);
  }
  if (level_override > 0) level = level_override;
  return build_measure(kind, a, p, r, half_line, tol, level);
}

Measure measure_from_config(const Config& cfg, int level_override) {
  std::string kind = lower(cfg.get("measure.kind", "gaussian"));
  int level = cfg.get_int("measure.level", Measure::kDefaultLevel);
  if (level_override > 0) level = level_override;
  return build_measure(kind, cfg.get_double("measure.a", 1.0),
                       cfg.get_double("measure.p", 2.0),
                       cfg.get_double("measure.r", 0.0),
                       cfg.get_bool("measure.half_line", false),
                       cfg.get_double("measure.tol", 1e-12), level);
}

BatterySpec battery_from_config(const Config& cfg) {
  BatterySpec spec;
  spec.seed = static_cast<std::uint64_t>(cfg.get_int("battery.seed", 12345));
  spec.size = cfg.get_int("battery.size", 64);
  spec.max_degree = cfg.get_int("battery.max_degree", 6);
  spec.bump_frac = cfg.get_double("battery.bump_frac", 0.9);
  if (spec.size < 1 || spec.max_degree < 1 || spec.bump_frac <= 0.0 ||
      spec.bump_frac > 1.0)
    throw ConfigError("invalid battery settings");
  return spec;
}

}  // namespace bllab
