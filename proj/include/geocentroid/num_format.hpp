#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace geocentroid {

/// Shortest decimal form that parses back to the same double ("1", "0.1").
inline std::string format_shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace geocentroid
