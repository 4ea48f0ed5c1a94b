#include "tbq/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace tbq::csv {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void OutputBundle::add(const std::string& name, std::string content) {
  files_[name] = std::move(content);
}

void OutputBundle::add_meta(const std::string& command, std::uint64_t seed,
                            std::uint64_t config_hash) {
  std::string meta;
  meta += "command=" + command + "\n";
  meta += "version=";
  meta += kVersion;
  meta += "\n";
  meta += "seed=" + std::to_string(seed) + "\n";
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(config_hash));
  meta += "config_fnv1a64=";
  meta += hex;
  meta += "\n";
  files_["meta.txt"] = std::move(meta);
}

void OutputBundle::write_all(const std::string& out_dir) const {
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, content] : files_) {
    const auto path = std::filesystem::path(out_dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
  }
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::invalid_argument("CsvWriter: wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

namespace {

double nice_tick(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (const double m : {1.0, 2.0, 5.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string svg_chart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series,
                      bool log_y) {
  const int width = 640, height = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = log_y ? (s.y[i] > 0 ? std::log10(s.y[i]) : 1e300) : s.y[i];
      if (y >= 1e300) continue;
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (x_min > x_max) {
    x_min = 0;
    x_max = 1;
    y_min = 0;
    y_max = 1;
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;

  auto px = [&](double x) {
    return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr);
  };
  auto py = [&](double yv) {
    const double y = log_y ? std::log10(std::max(yv, 1e-300)) : yv;
    return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
  };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" + title +
         "</text>\n";
  svg += "<text x=\"320\" y=\"470\" text-anchor=\"middle\" font-size=\"12\">" + x_label +
         "</text>\n";
  svg += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-size=\"12\" "
         "transform=\"rotate(-90 16 240)\">" +
         y_label + "</text>\n";
  // axes
  svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(mt) +
         "\" x2=\"" + std::to_string(ml) + "\" y2=\"" + std::to_string(height - mb) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(height - mb) +
         "\" x2=\"" + std::to_string(width - mr) + "\" y2=\"" +
         std::to_string(height - mb) + "\" stroke=\"black\"/>\n";

  const double xt = nice_tick(x_max - x_min);
  for (double x = std::ceil(x_min / xt) * xt; x <= x_max + 1e-9; x += xt) {
    svg += "<text x=\"" + format_double(px(x)) + "\" y=\"" +
           std::to_string(height - mb + 16) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + format_double(x) +
           "</text>\n";
  }
  const double yt = nice_tick(y_max - y_min);
  for (double y = std::ceil(y_min / yt) * yt; y <= y_max + 1e-9; y += yt) {
    const double vy = height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
    svg += "<text x=\"" + std::to_string(ml - 6) + "\" y=\"" + format_double(vy + 3) +
           "\" text-anchor=\"end\" font-size=\"10\">" +
           format_double(log_y ? std::pow(10.0, y) : y) + "</text>\n";
  }

  int ci = 0;
  for (const auto& s : series) {
    const char* color = colors[ci % 5];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && s.y[i] <= 0) continue;
      pts += format_double(px(s.x[i])) + "," + format_double(py(s.y[i])) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    svg += "<text x=\"" + std::to_string(width - mr - 140) + "\" y=\"" +
           std::to_string(mt + 16 * (ci + 1)) + "\" font-size=\"11\" fill=\"";
    svg += color;
    svg += "\">" + s.label + "</text>\n";
    ++ci;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace tbq::csv
