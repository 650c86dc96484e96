#pragma once

// Deterministic text formatting for reports and series: '.' decimal
// separator regardless of locale, scientific notation outside
// [1e-4, 1e6], plain otherwise. Identical inputs yield identical bytes.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

namespace dgplab::io {

inline std::string format_number(double v) {
  char buf[48];
  if (v == 0.0) return "0";
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  const double a = std::fabs(v);
  if (a < 1e-4 || a > 1e6) {
    std::snprintf(buf, sizeof buf, "%.10e", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.10g", v);
  }
  return buf;
}

inline std::string format_integer(std::int64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%" PRId64, v);
  return buf;
}

}  // namespace dgplab::io
