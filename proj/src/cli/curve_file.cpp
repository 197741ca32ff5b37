#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "kerrpair/cli.hpp"
#include "kerrpair/error.hpp"

namespace kerrpair::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::istringstream in(line);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!line.empty() && line.back() == sep) parts.emplace_back();
  return parts;
}

Column parse_header_cell(const std::string& cell) {
  const std::string t = trim(cell);
  const auto open = t.rfind(" (");
  if (open != std::string::npos && t.back() == ')') {
    return {t.substr(0, open), t.substr(open + 2, t.size() - open - 3)};
  }
  return {t, ""};
}

std::string header_cell(const Column& c) { return c.unit.empty() ? c.name : c.name + " (" + c.unit + ")"; }

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw Error(ErrorKind::Validation, "curve file: '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

void CurveFile::add_meta(const std::string& key, const std::string& value) { metadata.emplace_back(key, value); }

void CurveFile::add_meta(const std::string& key, double value) { metadata.emplace_back(key, format_number(value)); }

std::optional<std::string> CurveFile::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void CurveFile::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorKind::DimensionMismatch, "curve row width differs from the column count");
  }
  rows.push_back(std::move(row));
}

std::size_t CurveFile::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  throw Error(ErrorKind::Validation, "curve file has no column '" + name + "'");
}

std::vector<double> CurveFile::column(const std::string& name) const {
  const std::size_t i = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[i]);
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const CurveFile& f) {
  std::string s;
  for (const auto& [k, v] : f.metadata) s += "# " + k + " = " + v + "\n";
  for (std::size_t i = 0; i < f.columns.size(); ++i) {
    if (i) s += ',';
    s += header_cell(f.columns[i]);
  }
  s += '\n';
  for (const auto& row : f.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += format_number(row[i]);
    }
    s += '\n';
  }
  return s;
}

std::string to_json(const CurveFile& f) {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : f.metadata) j["metadata"][k] = v;
  j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : f.columns) j["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : f.rows) {
    auto r = nlohmann::ordered_json::array();
    for (double v : row) {
      if (std::isfinite(v)) {
        r.push_back(v);
      } else {
        r.push_back(nullptr);
      }
    }
    j["rows"].push_back(r);
  }
  return j.dump() + "\n";
}

CurveFile parse_csv(const std::string& text) {
  CurveFile f;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.size() > 2 ? line.substr(2) : "";
      const auto eq = body.find(" = ");
      if (eq == std::string::npos) {
        f.metadata.emplace_back(trim(body), "");
      } else {
        f.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 3));
      }
      continue;
    }
    const auto cells = split(line, ',');
    if (!header) {
      for (const auto& c : cells) f.columns.push_back(parse_header_cell(c));
      header = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c));
    f.add_row(std::move(row));
  }
  if (!header) throw Error(ErrorKind::Validation, "curve file has no header row");
  return f;
}

CurveFile parse_json(const std::string& text) {
  CurveFile f;
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    for (const auto& [k, v] : j.at("metadata").items()) f.metadata.emplace_back(k, v.get<std::string>());
    for (const auto& c : j.at("columns")) f.columns.push_back({c.at("name"), c.at("unit")});
    for (const auto& r : j.at("rows")) {
      std::vector<double> row;
      for (const auto& v : r) row.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
      f.add_row(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("malformed JSON curve file: ") + e.what());
  }
  return f;
}

void write_curve_file(const CurveFile& f, const std::string& path, Format format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Validation, "cannot write '" + path + "'");
  out << (format == Format::Json ? to_json(f) : to_csv(f));
  if (!out) throw Error(ErrorKind::Validation, "write to '" + path + "' failed");
}

CurveFile read_curve_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Validation, "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const std::string s = text.str();
  const auto first = s.find_first_not_of(" \t\r\n");
  return first != std::string::npos && s[first] == '{' ? parse_json(s) : parse_csv(s);
}

std::string sibling_path(const std::string& out, const std::string& tag, Format format) {
  const std::string ext = format == Format::Json ? ".json" : ".csv";
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  const std::string stem = dot != std::string::npos && (slash == std::string::npos || dot > slash) ? out.substr(0, dot) : out;
  return stem + "." + tag + ext;
}

}  // namespace kerrpair::cli
