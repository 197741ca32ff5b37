#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kerrpair::cli {

// ---------------------------------------------------------------------------
// Config: flat INI-style text
//
//   # comment            ; comment
//   [section]
//   key = value
//
// Keys before any section header land in section "".
// ---------------------------------------------------------------------------

class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  void set(const std::string& section, const std::string& key, const std::string& value);
  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> raw(const std::string& section, const std::string& key) const;

  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& section(const std::string& name) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// ---------------------------------------------------------------------------
// CurveFile
//
// CSV layout:
//   # key = value          metadata, one per line, in insertion order
//   name (unit),name (unit)
//   1.0000000000000000,2
// Numbers use %.17g; missing values are written as nan.
//
// JSON layout: {"metadata": {...}, "columns": [{"name", "unit"}], "rows": [[...]]}
// with null standing in for nan.
// ---------------------------------------------------------------------------

struct Column {
  std::string name;
  std::string unit;

  bool operator==(const Column&) const = default;
};

struct CurveFile {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(const std::string& key, const std::string& value);
  void add_meta(const std::string& key, double value);
  std::optional<std::string> meta(const std::string& key) const;
  void add_row(std::vector<double> row);
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

enum class Format { Csv, Json };

std::string format_number(double v);
std::string to_csv(const CurveFile& f);
std::string to_json(const CurveFile& f);
CurveFile parse_csv(const std::string& text);
CurveFile parse_json(const std::string& text);

void write_curve_file(const CurveFile& f, const std::string& path, Format format);
/// Detects the format from the first non-blank character.
CurveFile read_curve_file(const std::string& path);

/// "out.csv" + "spectrum" -> "out.spectrum.csv" (extension taken from `format`).
std::string sibling_path(const std::string& out, const std::string& tag, Format format);

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string command;
  Config params;
  std::optional<std::string> out;
  Format format = Format::Csv;
  bool reproducible = false;
};

// Exit statuses
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one command; files are written only after the computation succeeded.
/// Throws kerrpair::Error.
void run_command(const RunConfig& config, std::ostream& out);

/// Full command-line entry point; returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kerrpair::cli
