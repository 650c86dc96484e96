#pragma once

// A real number stored as (sign, log of magnitude). Products of thousands
// of Gaussian factors live far outside double range; in this form a
// product is a sign flip and an addition. log_mag of -infinity encodes an
// exact zero (canonical sign +1 so zero compares equal to itself).

#include <cmath>
#include <cstdint>
#include <limits>

namespace dgplab {

struct SignedLog {
  int sign = 1;  // -1 or +1
  double log_mag = -std::numeric_limits<double>::infinity();

  static SignedLog zero() { return {}; }

  static SignedLog from_real(double v) {
    if (v == 0.0) return zero();
    return {v < 0.0 ? -1 : 1, std::log(std::fabs(v))};
  }

  bool is_zero() const { return std::isinf(log_mag) && log_mag < 0.0; }

  double to_real() const {
    if (is_zero()) return 0.0;
    return sign * std::exp(log_mag);
  }

  // to_real clamped to the largest finite double; for report columns.
  double to_real_clamped() const {
    if (is_zero()) return 0.0;
    const double m = std::exp(log_mag);
    if (std::isinf(m)) return sign * std::numeric_limits<double>::max();
    return sign * m;
  }

  SignedLog operator*(const SignedLog& o) const {
    if (is_zero() || o.is_zero()) return zero();
    return {sign * o.sign, log_mag + o.log_mag};
  }

  SignedLog& operator*=(const SignedLog& o) { return *this = *this * o; }

  // Integer power, exponent >= 0 (exponent 0 of zero is defined as 1).
  SignedLog pow_int(std::int64_t e) const {
    if (e == 0) return {1, 0.0};
    if (is_zero()) return zero();
    return {(sign == -1 && (e % 2 != 0)) ? -1 : 1,
            log_mag * static_cast<double>(e)};
  }
};

// Total order by the encoded real value: negatives (largest magnitude
// first), zero, positives (smallest magnitude first).
inline bool signedlog_less(const SignedLog& a, const SignedLog& b) {
  const bool az = a.is_zero();
  const bool bz = b.is_zero();
  if (az && bz) return false;
  const int sa = az ? 0 : a.sign;
  const int sb = bz ? 0 : b.sign;
  if (sa != sb) return sa < sb;
  if (sa > 0) return a.log_mag < b.log_mag;
  if (sa < 0) return a.log_mag > b.log_mag;
  return false;
}

inline bool signedlog_eq(const SignedLog& a, const SignedLog& b) {
  return !signedlog_less(a, b) && !signedlog_less(b, a);
}

}  // namespace dgplab
