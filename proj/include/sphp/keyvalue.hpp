#pragma once

// Flat `key = value` configuration text: one assignment per line, `#` starts
// a comment, blank lines ignored. Keys are case-sensitive.

#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <system_error>

#include "sphp/errors.hpp"

namespace sphp {

struct KeyValueEntry {
  std::string value;
  int line = 0;
};

using KeyValueMap = std::map<std::string, KeyValueEntry, std::less<>>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

inline KeyValueMap parse_key_values(std::string_view text) {
  KeyValueMap out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected `key = value`", line_no);
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before `=`", line_no);
    if (value.empty()) throw ParseError("missing value for `" + std::string(key) + "`", line_no);
    if (out.contains(key)) throw ParseError("duplicate key `" + std::string(key) + "`", line_no);
    out.emplace(std::string(key), KeyValueEntry{std::string(value), line_no});
  }
  return out;
}

inline double parse_double(std::string_view field, const KeyValueEntry& entry) {
  double v = 0.0;
  const char* first = entry.value.data();
  const char* last = first + entry.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError("`" + std::string(field) + "` is not a number: " + entry.value, entry.line);
  return v;
}

}  // namespace sphp
