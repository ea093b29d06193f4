#include "bllab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "bllab/errors.hpp"
#include "bllab/numerics.hpp"

namespace bllab {

std::string format_double(double v) {
  char buf[40];
  // Shortest representation that still round-trips.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = std::strtod(buf, nullptr);
    if (back == v || (std::isnan(back) && std::isnan(v))) return buf;
  }
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path);
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  if (!out) throw IOError("write failed: " + path);
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IOError("write failed: " + path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path);
  out << text;
  if (!out) throw IOError("write failed: " + path);
}

std::string svg_line_plot(const std::vector<double>& xs,
                          const std::vector<double>& ys, const SvgOptions& opt) {
  const int W = opt.width, H = opt.height;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
       std::to_string(W) + "\" height=\"" + std::to_string(H) + "\">\n";
  if (opt.timestamp) {
    std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    s += "<!-- generated " + std::string(buf) + " -->\n";
  }
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + std::to_string(W / 2) +
       "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + opt.title +
       "</text>\n";

  if (!xs.empty()) {
    auto tx = [&](double x) {
      double v = opt.log_x ? std::log10(x) : x;
      double lo = opt.log_x ? std::log10(xs.front()) : xs.front();
      double hi = opt.log_x ? std::log10(xs.back()) : xs.back();
      if (hi <= lo) return ml + 0.5 * (W - ml - mr);
      return ml + (v - lo) / (hi - lo) * (W - ml - mr);
    };
    double ylo = ys.front(), yhi = ys.front();
    for (double y : ys) {
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
    if (yhi <= ylo) yhi = ylo + 1.0;
    auto ty = [&](double y) {
      return H - mb - (y - ylo) / (yhi - ylo) * (H - mt - mb);
    };

    // Axes.
    s += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(H - mb) +
         "\" x2=\"" + format_double(W - mr) + "\" y2=\"" +
         format_double(H - mb) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt) +
         "\" x2=\"" + format_double(ml) + "\" y2=\"" + format_double(H - mb) +
         "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      double fy = ylo + (yhi - ylo) * k / 4.0;
      char lab[32];
      std::snprintf(lab, sizeof lab, "%.3g", fy);
      s += "<text x=\"" + format_double(ml - 6) + "\" y=\"" +
           format_double(ty(fy) + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + lab + "</text>\n";
    }
    s += "<text x=\"" + std::to_string(W / 2) + "\" y=\"" +
         std::to_string(H - 12) + "\" text-anchor=\"middle\" font-size=\"12\">" +
         opt.x_label + (opt.log_x ? " (log)" : "") + "</text>\n";
    s += "<text x=\"16\" y=\"" + std::to_string(H / 2) +
         "\" font-size=\"12\" transform=\"rotate(-90 16 " +
         std::to_string(H / 2) + ")\" text-anchor=\"middle\">" + opt.y_label +
         "</text>\n";

    if (xs.size() > 1) {
      s += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < xs.size(); ++i) {
        s += format_double(tx(xs[i])) + "," + format_double(ty(ys[i]));
        if (i + 1 < xs.size()) s += " ";
      }
      s += "\"/>\n";
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
      s += "<circle cx=\"" + format_double(tx(xs[i])) + "\" cy=\"" +
           format_double(ty(ys[i])) + "\" r=\"2.2\" fill=\"#1f6fb2\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string config_hash(const std::string& canonical_config) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config)));
  return buf;
}

}  // namespace bllab
