#pragma once

// Column-oriented numeric tables and their CSV rendering. CSV uses '.' as the
// decimal separator, '\n' line endings, a header row and 17 significant
// digits, so identical tables always render to identical bytes.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace sphp {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Free-form `key: value` lines emitted as `#` comments ahead of the header.
  std::vector<std::pair<std::string, std::string>> notes;

  void add_row(std::vector<double> row) { rows.push_back(std::move(row)); }
  void note(std::string key, std::string value) { notes.emplace_back(std::move(key), std::move(value)); }
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv(const Table& t, bool with_notes = true) {
  std::string out;
  if (with_notes)
    for (const auto& [k, v] : t.notes) out += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace sphp
