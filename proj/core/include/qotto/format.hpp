#pragma once

#include <charconv>
#include <string>
#include <system_error>

// Locale-independent float formatting.  Data files use fmt9 (9 significant
// digits) so that output is byte-reproducible; configs use fmt_full
// (round-trip exact).

namespace qotto {

inline std::string format_double(double v, int precision) {
  char buf[64];
  std::to_chars_result r =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
  return std::string(buf, r.ptr);
}

inline std::string fmt9(double v) { return format_double(v, 9); }
inline std::string fmt_full(double v) { return format_double(v, 17); }

}  // namespace qotto
