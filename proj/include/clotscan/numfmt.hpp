#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace clotscan {

// Locale-independent, shortest round-trip decimal formatting. Keeps CSV/SVG
// output byte-stable across runs and environments.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace clotscan
