#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace bllab {

using Json = nlohmann::json;

/// Shortest round-trip formatting for doubles (%.17g trimmed), so CSV files
/// reload bit-exactly and identical runs produce identical bytes.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

void write_csv(const std::string& path, const CsvTable& table);
void write_json(const std::string& path, const Json& j);
void write_text(const std::string& path, const std::string& text);

struct SvgOptions {
  std::string title;
  std::string x_label = "x", y_label = "y";
  bool log_x = false;
  bool timestamp = false;  // suppressible for byte-identical artifacts
  int width = 720, height = 460;
};

/// Minimal line plot with markers; a single point renders as a marker only.
std::string svg_line_plot(const std::vector<double>& xs,
                          const std::vector<double>& ys, const SvgOptions& opt);

/// FNV-1a hash of the canonical configuration dump, stamped into artifacts.
std::string config_hash(const std::string& canonical_config);

}  // namespace bllab
