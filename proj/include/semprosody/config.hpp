#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "semprosody/error.hpp"

namespace semprosody {

/// Flat `section.key -> value` settings read from a TOML-style file:
///
///   # comment
///   [probe]
///   epochs = 500
///   model = "opus"
///
/// Lookups with a default record that default, so dump() always shows the
/// fully resolved configuration of a run.
class RunConfig {
public:
  static RunConfig parse(std::istream &in, const std::string &origin = "config") {
    RunConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto text = trim(strip_comment(line));
      if (text.empty())
        continue;
      if (text.front() == '[') {
        if (text.back() != ']' || text.size() < 3)
          throw ConfigError(origin + ": " + at_line(lineno, "malformed section header"));
        section = trim(text.substr(1, text.size() - 2));
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ": " + at_line(lineno, "expected key = value"));
      const auto key = trim(text.substr(0, eq));
      if (key.empty())
        throw ConfigError(origin + ": " + at_line(lineno, "empty key"));
      cfg.set(section.empty() ? key : section + "." + key,
              unquote(trim(text.substr(eq + 1)), origin, lineno));
    }
    return cfg;
  }

  static RunConfig load(const std::string &path) {
    std::ifstream in(path);
    if (!in)
      throw ConfigError("cannot open config file " + path);
    return parse(in, path);
  }

  void set(const std::string &key, std::string value) {
    if (key.find('.') == std::string::npos)
      throw ConfigError("config key '" + key + "' needs a section, e.g. run." + key);
    values_[key] = std::move(value);
  }

  /// Later settings win.
  void merge(const RunConfig &other) {
    for (const auto &[k, v] : other.values_)
      values_[k] = v;
  }

  bool has(const std::string &key) const { return values_.count(key) != 0; }

  std::string str(const std::string &key, const std::string &def) {
    auto [it, _] = values_.try_emplace(key, def);
    return it->second;
  }

  std::string required(const std::string &key) const {
    auto it = values_.find(key);
    if (it == values_.end() || it->second.empty())
      throw ConfigError("missing required setting " + key);
    return it->second;
  }

  template <typename T> T number(const std::string &key, T def) {
    if (!has(key)) {
      values_[key] = format_number(def);
      return def;
    }
    const auto &s = values_.at(key);
    T out{};
    const auto *end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    if (ec != std::errc() || p != end)
      throw ConfigError("setting " + key + " is not a valid number: " + s);
    return out;
  }

  bool flag(const std::string &key, bool def) {
    auto [it, _] = values_.try_emplace(key, def ? "true" : "false");
    const auto &v = it->second;
    if (v == "true" || v == "1" || v == "yes")
      return true;
    if (v == "false" || v == "0" || v == "no")
      return false;
    throw ConfigError("setting " + key + " is not a boolean: " + v);
  }

  /// Comma-separated list.
  std::vector<std::string> list(const std::string &key, const std::string &def) {
    std::vector<std::string> out;
    std::stringstream ss(str(key, def));
    std::string item;
    while (std::getline(ss, item, ','))
      if (auto t = trim(item); !t.empty())
        out.push_back(t);
    return out;
  }

  /// Sections in key order; the output parses back to an equal config.
  void dump(std::ostream &os) const {
    std::string section;
    bool first = true;
    for (const auto &[key, value] : values_) {
      const auto dot = key.find('.');
      const auto sec = key.substr(0, dot);
      if (first || sec != section) {
        os << (first ? "" : "\n") << '[' << sec << "]\n";
        section = sec;
        first = false;
      }
      os << key.substr(dot + 1) << " = " << quote(value) << '\n';
    }
  }

  const std::map<std::string, std::string> &values() const { return values_; }

  bool operator==(const RunConfig &) const = default;

private:
  std::map<std::string, std::string> values_;

  static std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
      return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static std::string strip_comment(const std::string &s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '\\' && quoted) {
        ++i;
        continue;
      }
      if (s[i] == '"')
        quoted = !quoted;
      else if (s[i] == '#' && !quoted)
        return s.substr(0, i);
    }
    return s;
  }

  static std::string unquote(const std::string &v, const std::string &origin,
                             std::size_t lineno) {
    if (v.empty() || v.front() != '"')
      return v;
    if (v.size() < 2 || v.back() != '"')
      throw ConfigError(origin + ": " + at_line(lineno, "unterminated string"));
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        const char c = v[++i];
        out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
      } else {
        out.push_back(v[i]);
      }
    }
    return out;
  }

  static std::string quote(const std::string &v) {
    std::string out = "\"";
    for (char c : v) {
      if (c == '"' || c == '\\')
        out.push_back('\\');
      if (c == '\n')
        out += "\\n";
      else if (c == '\t')
        out += "\\t";
      else
        out.push_back(c);
    }
    return out + '"';
  }

  template <typename T> static std::string format_number(T v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
  }
};

} // namespace semprosody
