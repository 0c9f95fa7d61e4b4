#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "semprosody/error.hpp"

namespace semprosody {

/// Rounds half-up to one decimal and prints it, e.g. 75.384 -> "75.4".
inline std::string format_one_decimal(double value) {
  // Nudge values like 75.45 that are stored as 75.4499999.
  const double r = std::floor(value * 10.0 + 0.5 + 1e-9) / 10.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", r);
  return buf;
}

/// A [0,1] fraction rendered as a one-decimal percentage.
inline std::string format_percent(double fraction) {
  return format_one_decimal(fraction * 100.0);
}

inline constexpr const char *kMissingCell = "—";

/// One row per system; values are percentages, absent cells print as a dash.
struct ScoreReport {
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::map<std::string, double>>> rows;

  void add(const std::string &system, const std::string &column, double percent) {
    if (std::find(columns.begin(), columns.end(), column) == columns.end())
      columns.push_back(column);
    for (auto &[name, cells] : rows)
      if (name == system) {
        cells[column] = percent;
        return;
      }
    rows.push_back({system, {{column, percent}}});
  }

  /// Registers a column even if no system has a value for it.
  void declare(const std::string &column) {
    if (std::find(columns.begin(), columns.end(), column) == columns.end())
      columns.push_back(column);
  }

  std::string cell(std::size_t row, const std::string &column) const {
    const auto &cells = rows[row].second;
    auto it = cells.find(column);
    return it == cells.end() ? kMissingCell : format_one_decimal(it->second);
  }

  void write_tsv(std::ostream &os) const {
    os << "system";
    for (const auto &c : columns)
      os << '\t' << c;
    os << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
      os << rows[r].first;
      for (const auto &c : columns)
        os << '\t' << cell(r, c);
      os << '\n';
    }
  }

  void write_text(std::ostream &os) const {
    auto width = [](const std::string &s) {
      std::size_t w = 0;
      for (unsigned char ch : s)
        w += (ch & 0xC0) != 0x80;
      return w;
    };
    std::vector<std::size_t> w(columns.size() + 1, width("system"));
    for (const auto &[name, _] : rows)
      w[0] = std::max(w[0], width(name));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      w[c + 1] = width(columns[c]);
      for (std::size_t r = 0; r < rows.size(); ++r)
        w[c + 1] = std::max(w[c + 1], width(cell(r, columns[c])));
    }
    auto pad_left = [&](const std::string &s, std::size_t n) {
      return s + std::string(n - width(s), ' ');
    };
    auto pad_right = [&](const std::string &s, std::size_t n) {
      return std::string(n - width(s), ' ') + s;
    };
    os << pad_left("system", w[0]);
    for (std::size_t c = 0; c < columns.size(); ++c)
      os << "  " << pad_right(columns[c], w[c + 1]);
    os << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
      os << pad_left(rows[r].first, w[0]);
      for (std::size_t c = 0; c < columns.size(); ++c)
        os << "  " << pad_right(cell(r, columns[c]), w[c + 1]);
      os << '\n';
    }
  }
};

/// Reads a table written by ScoreReport::write_tsv; dash cells stay absent.
inline ScoreReport read_score_tsv(std::istream &in) {
  ScoreReport rep;
  std::string line;
  if (!std::getline(in, line))
    return rep;
  auto split = [](const std::string &l) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
      auto tab = l.find('\t', start);
      out.push_back(l.substr(start, tab - start));
      if (tab == std::string::npos)
        return out;
      start = tab + 1;
    }
  };
  const auto header = split(line);
  if (header.empty() || header[0] != "system")
    throw DataError(at_line(1, "score table must start with a 'system' column"));
  for (std::size_t c = 1; c < header.size(); ++c)
    rep.declare(header[c]);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw DataError(at_line(lineno, "expected " + std::to_string(header.size()) +
                                          " cells, found " + std::to_string(cells.size())));
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c] == kMissingCell)
        continue;
      try {
        rep.add(cells[0], header[c], std::stod(cells[c]));
      } catch (const std::invalid_argument &) {
        throw DataError(at_line(lineno, "not a number: " + cells[c]));
      }
    }
  }
  return rep;
}

/// Reads an external score file (one real per line) and returns the mean
/// as a percentage, or nothing when the file does not exist. Values in
/// [0,1] are treated as fractions.
inline std::optional<double> load_external_scores(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    return std::nullopt;
  double sum = 0.0, v = 0.0;
  std::size_t n = 0;
  bool fractions = true;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    try {
      v = std::stod(line);
    } catch (const std::exception &) {
      throw DataError(at_line(lineno, "not a number in " + path));
    }
    fractions = fractions && v >= 0.0 && v <= 1.0;
    sum += v;
    ++n;
  }
  if (n == 0)
    return std::nullopt;
  const double mean = sum / static_cast<double>(n);
  return fractions ? mean * 100.0 : mean;
}

} // namespace semprosody
