#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

// Deterministic artifact output: CSV files (UTF-8, comma separator, header
// row, '.' decimal point), a run manifest, and optional SVG charts. Files
// are staged in memory and written only after a command succeeds, so failed
// runs leave no partial outputs.

namespace tbq::csv {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);

class OutputBundle {
 public:
  void add(const std::string& name, std::string content);
  void add_meta(const std::string& command, std::uint64_t seed,
                std::uint64_t config_hash);
  /// Creates the directory if needed and writes every staged file.
  void write_all(const std::string& out_dir) const;
  const std::map<std::string, std::string>& files() const { return files_; }

 private:
  std::map<std::string, std::string> files_;
};

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return body_; }

 private:
  std::size_t columns_;
  std::string body_;
};

/// Two-column key/value CSV used for fit reports and run summaries.
class KeyValueCsv {
 public:
  KeyValueCsv() : w_({"key", "value"}) {}
  void add(const std::string& key, double value) { w_.row({key, format_double(value)}); }
  void add(const std::string& key, const std::string& value) { w_.row({key, value}); }
  std::string str() const { return w_.str(); }

 private:
  CsvWriter w_;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal deterministic polyline chart (no timestamps or random ids).
std::string svg_chart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series,
                      bool log_y = false);

}  // namespace tbq::csv
