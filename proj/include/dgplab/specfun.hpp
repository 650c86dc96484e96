#pragma once

// Closed-form special-function values used by the log-moment machinery:
// derivatives of Gamma at s = 1/2, s-derivatives of the upper incomplete
// Gamma function via a residue-plus-series expansion of the auxiliary T
// function, the error function, and the handful of constants everything
// else is assembled from.
//
// T(n, 1/2, x) is the function defined by
//   d/ds Gamma(s, x) |_{s=1/2} = log(x) Gamma(1/2, x) + x T(3, 1/2, x)
// together with the analogous relations for the second and third
// derivatives. Its expansion over the poles of the Mellin-Barnes
// representation is
//   T(n, 1/2, x) = R_n(x) + (-1)^(n-1) 2^(n-1) x^(-1/2)
//                + sum_k (-1)^(n+k) x^(k+1/2) / ((k+1)! (k+3/2)^(n-1)),
// where R_n collects the order-(n-1) pole at s = -1. Every piece below is
// cross-checked in the tests against finite differences of a quadrature
// evaluation of Gamma(s, x); the finite-difference oracle is the arbiter
// for all sign and factorial conventions.

#include <cmath>
#include <stdexcept>
#include <string>

namespace dgplab::specfun {

struct SpecfunConstants {
  double euler_gamma;
  double zeta2;
  double zeta3;
  double zeta4;
  double sqrt_pi;
};

inline constexpr SpecfunConstants constants{
    0.57721566490153286060651209008240243,  // Euler-Mascheroni
    1.64493406684822643647241516664602519,  // zeta(2) = pi^2/6
    1.20205690315959428539973816151144999,  // zeta(3), no closed form
    1.08232323371113819151600369654116790,  // zeta(4) = pi^4/90
    1.77245385090551602729816748334114518,  // Gamma(1/2)
};

// -psi(1/2) = euler_gamma + 2 log 2; this combination shows up everywhere.
inline constexpr double digamma_half_negated =
    1.96351002602142347944097633299875556;

struct SeriesTruncation {
  int k_max = 10;
};

inline double erf(double x) { return std::erf(x); }
inline double erfc(double x) { return std::erfc(x); }

inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z * 0.70710678118654752440084436210484904);
}

// Gamma(1/2, x) = sqrt(pi) * erfc(sqrt(x)), x >= 0.
inline double upper_gamma_half(double x) {
  if (x < 0.0) throw std::domain_error("upper_gamma_half: x must be >= 0");
  return constants.sqrt_pi * std::erfc(std::sqrt(x));
}

namespace detail {

// P_m with Gamma^(m)(1/2) = (-1)^m sqrt(pi) P_m(euler_gamma + 2 log 2).
// The same polynomials, with the argument shifted by log(sqrt(2) sigma),
// appear in the t_residue constants below.
inline double gamma_derivative_poly(int m, double u) {
  const double z2 = constants.zeta2;
  const double z3 = constants.zeta3;
  const double z4 = constants.zeta4;
  switch (m) {
    case 0:
      return 1.0;
    case 1:
      return u;
    case 2:
      return u * u + 3.0 * z2;
    case 3:
      return u * u * u + 9.0 * z2 * u + 14.0 * z3;
    case 4: {
      const double u2 = u * u;
      return u2 * u2 + 18.0 * z2 * u2 + 56.0 * z3 * u + 27.0 * z2 * z2 +
             90.0 * z4;
    }
    default:
      throw std::domain_error("gamma_derivative_poly: m must be in 0..4");
  }
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double binomial(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

inline double gamma_half_derivative_unchecked(int order) {
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * constants.sqrt_pi *
         gamma_derivative_poly(order, digamma_half_negated);
}

// Contribution of the order-(n-1) pole at s = -1:
//   R_n(x) = -(-1)^(n-1)/(n-2)! * sum_j C(n-2, j) (-1)^j Gamma^(j)(1/2)
//            * x^(-1) log(x)^(n-2-j).
inline double t_pole_part(int n, double x) {
  const double lx = std::log(x);
  double sum = 0.0;
  for (int j = 0; j <= n - 2; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += binomial(n - 2, j) * sign * gamma_half_derivative_unchecked(j) *
           std::pow(lx, n - 2 - j);
  }
  const double outer = (n % 2 == 0) ? 1.0 : -1.0;  // -(-1)^(n-1)
  return outer * sum / (factorial(n - 2) * x);
}

// Contribution of the simple pole at s = -1/2.
inline double t_half_pole(int n, double x) {
  const double sign = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^(n-1)
  return sign * std::pow(2.0, n - 1) / std::sqrt(x);
}

// k-th term of the pole-ladder series of T(n, 1/2, x), sign included.
inline double t_series_term_at(int n, double x, int k) {
  const double sign = ((n + k) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(x, k + 0.5) /
         (factorial(k + 1) * std::pow(1.5 + k, n - 1));
}

inline double t_function_at(int n, double x, int k_max) {
  if (n < 3 || n > 5) throw std::domain_error("t_function_at: n must be in 3..5");
  if (!(x > 0.0 && x < 1.0))
    throw std::domain_error("t_function_at: x must be in (0, 1)");
  if (k_max < 1) throw std::domain_error("t_function_at: k_max must be >= 1");
  double sum = 0.0;
  for (int k = 0; k <= k_max; ++k) sum += t_series_term_at(n, x, k);
  return t_pole_part(n, x) + t_half_pole(n, x) + sum;
}

// d^order/ds^order Gamma(s, x) at s = 1/2, composed from T values.
inline double upper_gamma_s_derivative_at(int order, double x, int k_max) {
  if (!(x > 0.0 && x < 1.0))
    throw std::domain_error(
        "upper_gamma_s_derivative_at: x must be in (0, 1)");
  const double lx = std::log(x);
  const double g = upper_gamma_half(x);
  switch (order) {
    case 1:
      return lx * g + x * t_function_at(3, x, k_max);
    case 2:
      return lx * lx * g + 2.0 * x * (lx * t_function_at(3, x, k_max) +
                                      t_function_at(4, x, k_max));
    case 3:
      return lx * lx * lx * g +
             3.0 * x *
                 (lx * lx * t_function_at(3, x, k_max) +
                  2.0 * lx * t_function_at(4, x, k_max) +
                  2.0 * t_function_at(5, x, k_max));
    default:
      throw std::domain_error(
          "upper_gamma_s_derivative_at: order must be in 1..3");
  }
}

inline double t_argument(double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("sigma must be > 0");
  return 1.0 / (std::sqrt(2.0) * sigma);
}

inline void require_series_region(double sigma, const char* who) {
  if (!(sigma * sigma > 0.5))
    throw std::domain_error(std::string(who) +
                            ": requires sigma^2 > 1/2 (series region)");
}

}  // namespace detail

// d^order Gamma(s)/ds^order at s = 1/2, order in 0..4.
inline double gamma_half_derivative(int order) {
  if (order < 0 || order > 4)
    throw std::domain_error("gamma_half_derivative: order must be in 0..4");
  return detail::gamma_half_derivative_unchecked(order);
}

// The residue constants c_3, c_4, c_5 in circulation for the pole of
// T(n, 1/2, 1/(sqrt(2) sigma)), in exact symbolic form:
//   c_n = sqrt(pi) (sqrt(2) sigma) / (n-1)! * P_{n-1}(2 log 2 + gamma
//         + log(sqrt(2) sigma)).
// They treat the s = -1 pole as if it had order n (one too high) and drop
// the s = -1/2 term, so combined with the ladder series they do NOT
// reproduce the finite-difference oracle; t_function uses the corrected
// pole terms. Kept for inspection and comparison.
inline double t_residue(int n, double sigma) {
  if (n < 3 || n > 5) throw std::domain_error("t_residue: n must be in 3..5");
  if (!(sigma > 0.0)) throw std::domain_error("t_residue: sigma must be > 0");
  const double bracket =
      digamma_half_negated + std::log(std::sqrt(2.0) * sigma);
  return constants.sqrt_pi * std::sqrt(2.0) * sigma *
         detail::gamma_derivative_poly(n - 1, bracket) /
         detail::factorial(n - 1);
}

// k-th series term of T(n, 1/2, 1/(sqrt(2) sigma)), sign included; the
// leading n = 3 term has magnitude (4/9) 2^(-1/4) sigma^(-1/2).
inline double t_series_term(int n, double sigma, int k) {
  if (n < 3 || n > 5) throw std::domain_error("t_series_term: n must be in 3..5");
  if (k < 0) throw std::domain_error("t_series_term: k must be >= 0");
  return detail::t_series_term_at(n, detail::t_argument(sigma), k);
}

// T(n, 1/2, 1/(sqrt(2) sigma)); requires sigma^2 > 1/2.
inline double t_function(int n, double sigma, SeriesTruncation trunc = {}) {
  detail::require_series_region(sigma, "t_function");
  return detail::t_function_at(n, detail::t_argument(sigma), trunc.k_max);
}

// d^order/ds^order Gamma(s, 1/(sqrt(2) sigma)) at s = 1/2, order in 1..3;
// requires sigma^2 > 1/2.
inline double incomplete_gamma_s_derivative(int order, double sigma,
                                            SeriesTruncation trunc = {}) {
  detail::require_series_region(sigma, "incomplete_gamma_s_derivative");
  return detail::upper_gamma_s_derivative_at(
      order, detail::t_argument(sigma), trunc.k_max);
}

}  // namespace dgplab::specfun
