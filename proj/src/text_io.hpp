#pragma once

// Line helpers shared by the versioned text containers (reservoir,
// conceptor, model).

#include <istream>
#include <string>
#include <string_view>
#include <utility>

#include "esnc/error.hpp"
#include "esnc/matrix.hpp"

namespace esnc::textio {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// Next non-blank line, trimmed. Throws ParseError at end of stream.
inline std::string next_line(std::istream& is, std::string_view expecting) {
  std::string line;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (!t.empty()) return t;
  }
  throw Error(Errc::ParseError, "unexpected end of input, expected " + std::string(expecting));
}

inline void expect_line(std::istream& is, std::string_view want) {
  const std::string got = next_line(is, want);
  if (got != want) {
    throw Error(Errc::ParseError, "expected '" + std::string(want) + "', got '" + got + "'");
  }
}

inline std::string expect_key(std::istream& is, std::string_view key) {
  const std::string line = next_line(is, key);
  const auto eq = line.find('=');
  if (eq == std::string::npos || line.substr(0, eq) != key) {
    throw Error(Errc::ParseError, "expected '" + std::string(key) + "=...', got '" + line + "'");
  }
  return line.substr(eq + 1);
}

inline unsigned long long parse_count(std::string_view text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string_view::npos) {
    throw Error(Errc::ParseError, "not a non-negative integer: '" + std::string(text) + "'");
  }
  return std::stoull(std::string(text));
}

inline Matrix read_tagged_matrix(std::istream& is, std::string_view tag) {
  expect_line(is, tag);
  return read_matrix(is);
}

}  // namespace esnc::textio
