#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

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

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double to_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw Error(ErrorKind::Validation, what + ": '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw Error(ErrorKind::Validation, origin + ":" + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Validation, origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::Validation, origin + ":" + std::to_string(lineno) + ": empty key");
    std::string value = trim(t.substr(eq + 1));
    // Trailing comments after whitespace.
    for (const char* marker : {" #", " ;", "\t#", "\t;"}) {
      const auto pos = value.find(marker);
      if (pos != std::string::npos) value = trim(value.substr(0, pos));
    }
    c.sections_[section][key] = value;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Validation, "cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = value;
}

bool Config::has(const std::string& section, const std::string& key) const { return raw(section, key).has_value(); }

std::optional<std::string> Config::raw(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  const auto r = raw(section, key);
  return r ? to_double(*r, section + "." + key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
  const auto r = raw(section, key);
  if (!r) return fallback;
  const double v = to_double(*r, section + "." + key);
  if (v != std::floor(v) || std::abs(v) > 1e15) {
    throw Error(ErrorKind::Validation, section + "." + key + ": '" + *r + "' is not an integer");
  }
  return static_cast<long>(v);
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const auto r = raw(section, key);
  if (!r) return fallback;
  const std::string v = lower(trim(*r));
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw Error(ErrorKind::Validation, section + "." + key + ": '" + *r + "' is not a boolean");
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  return raw(section, key).value_or(fallback);
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  const auto r = raw(section, key);
  if (!r) return fallback;
  std::vector<double> out;
  std::istringstream in(*r);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(item, section + "." + key));
  if (out.empty()) throw Error(ErrorKind::Validation, section + "." + key + ": empty list");
  return out;
}

const std::map<std::string, std::string>& Config::section(const std::string& name) const {
  static const std::map<std::string, std::string> empty;
  const auto s = sections_.find(name);
  return s == sections_.end() ? empty : s->second;
}

}  // namespace kerrpair::cli
