#pragma once

// Moments of log|X| for X ~ N(0, sigma^2). Everything except the absolute
// third moment has a clean closed form for every sigma > 0; the absolute
// third moment has one only while sigma^2 > 1/2 (the series region of the
// incomplete-gamma machinery) and otherwise falls back to quadrature.

#include <cmath>
#include <stdexcept>
#include <string>

#include "dgplab/quadrature.hpp"
#include "dgplab/specfun.hpp"

namespace dgplab::logmoments {

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Var(log|X|) = pi^2 / 8, independent of sigma.
inline constexpr double log_abs_variance = pi * pi / 8.0;

struct AbsThirdMoment {
  double value;
  bool exact;  // closed form (true) vs quadrature fallback (false)
};

struct LogAbsMoments {
  double sigma;
  double mean;      // E log|X|
  double second;    // E log^2|X|
  double variance;  // always pi^2/8
  double abs_third; // E |log|X||^3
  double fourth;    // E log^4|X|
  bool abs_third_exact;
};

namespace detail {

inline void require_positive_sigma(double sigma, const char* who) {
  if (!(sigma > 0.0))
    throw std::domain_error(std::string(who) + ": sigma must be > 0");
}

// E |log|X||^3 by tanh-sinh quadrature after rescaling X = sqrt(2) sigma U:
// (2/sqrt(pi)) * int_0^inf |log(sqrt(2) sigma u)|^3 e^(-u^2) du,
// split where the logarithm changes sign.
inline double rho_quadrature(double sigma) {
  const double a = std::log(std::sqrt(2.0) * sigma);
  auto f = [a](double u) {
    const double l = a + std::log(u);
    return std::abs(l * l * l) * std::exp(-u * u);
  };
  const double split = 1.0 / (std::sqrt(2.0) * sigma);
  const double upper = split < 9.0 ? 9.0 : split + 9.0;
  const double integral = quadrature::tanh_sinh(f, 0.0, split, 1e-12) +
                          quadrature::tanh_sinh(f, split, upper, 1e-12);
  return 2.0 / specfun::constants.sqrt_pi * integral;
}

// Closed form of E |log|X||^3 for sigma^2 > 1/2. With a = log(sqrt(2) sigma)
// and J_n(y) = d^n Gamma(s, y)/ds^n at s = 1/2 taken at y = 1/(2 sigma^2)
// (so that sqrt(y) is where log(sqrt(2) sigma u) changes sign):
//   rho = a^3 (1 - 2 erf(1/(sqrt(2) sigma)))
//       + (3 a^2 / (2 sqrt(pi))) (2 J_1 - Gamma'(1/2))
//       + (3 a / (4 sqrt(pi)))   (2 J_2 - Gamma''(1/2))
//       + (1 / (8 sqrt(pi)))     (2 J_3 - Gamma'''(1/2)).
inline double rho_closed_form(double sigma, int k_max) {
  const double sp = specfun::constants.sqrt_pi;
  const double a = std::log(std::sqrt(2.0) * sigma);
  const double b = 1.0 / (std::sqrt(2.0) * sigma);
  const double y = b * b;  // = 1 / (2 sigma^2), in (0, 1) here
  const double j1 = specfun::detail::upper_gamma_s_derivative_at(1, y, k_max);
  const double j2 = specfun::detail::upper_gamma_s_derivative_at(2, y, k_max);
  const double j3 = specfun::detail::upper_gamma_s_derivative_at(3, y, k_max);
  const double g1 = specfun::gamma_half_derivative(1);
  const double g2 = specfun::gamma_half_derivative(2);
  const double g3 = specfun::gamma_half_derivative(3);
  return a * a * a * (1.0 - 2.0 * specfun::erf(b)) +
         3.0 * a * a / (2.0 * sp) * (2.0 * j1 - g1) +
         3.0 * a / (4.0 * sp) * (2.0 * j2 - g2) +
         1.0 / (8.0 * sp) * (2.0 * j3 - g3);
}

}  // namespace detail

// E log|X| = log sigma - (gamma + log 2)/2.
inline double mean_log_abs(double sigma) {
  detail::require_positive_sigma(sigma, "mean_log_abs");
  return std::log(sigma) -
         0.5 * (specfun::constants.euler_gamma + M_LN2);
}

// E log^2|X|, with a = log(sqrt(2) sigma) and A = gamma + 2 log 2:
// a^2 - a A + (A^2 + pi^2/2)/4.
inline double second_moment_log_abs(double sigma) {
  detail::require_positive_sigma(sigma, "second_moment_log_abs");
  const double a = std::log(std::sqrt(2.0) * sigma);
  const double A = specfun::digamma_half_negated;
  return a * a - a * A + 0.25 * (A * A + 0.5 * pi * pi);
}

inline double variance_log_abs(double sigma) {
  detail::require_positive_sigma(sigma, "variance_log_abs");
  return log_abs_variance;
}

// E log^4|X|; valid for every sigma > 0.
inline double fourth_moment_log_abs(double sigma) {
  detail::require_positive_sigma(sigma, "fourth_moment_log_abs");
  const double a = std::log(std::sqrt(2.0) * sigma);
  const double A = specfun::digamma_half_negated;
  const double z3 = specfun::constants.zeta3;
  const double pi2 = pi * pi;
  const double a2 = a * a;
  const double A2 = A * A;
  return a2 * a2 - 2.0 * a2 * a * A + 1.5 * a2 * (A2 + 0.5 * pi2) -
         0.5 * a * (A2 * A + 1.5 * pi2 * A + 14.0 * z3) +
         (A2 * A2 + 3.0 * pi2 * A2 + 56.0 * A * z3 + 1.75 * pi2 * pi2) /
             16.0;
}

// Hoelder bound rho <= (E log^4|X|)^(3/4); finite for every sigma > 0.
inline double holder_bound(double sigma) {
  return std::pow(fourth_moment_log_abs(sigma), 0.75);
}

// E |log|X||^3: closed form when sigma^2 > 1/2, quadrature otherwise.
inline AbsThirdMoment abs_third_moment(double sigma,
                                       specfun::SeriesTruncation trunc = {}) {
  detail::require_positive_sigma(sigma, "abs_third_moment");
  if (sigma * sigma > 0.5)
    return {detail::rho_closed_form(sigma, trunc.k_max), true};
  return {detail::rho_quadrature(sigma), false};
}

inline LogAbsMoments moments(double sigma,
                             specfun::SeriesTruncation trunc = {}) {
  detail::require_positive_sigma(sigma, "moments");
  const AbsThirdMoment rho = abs_third_moment(sigma, trunc);
  return LogAbsMoments{sigma,
                       mean_log_abs(sigma),
                       second_moment_log_abs(sigma),
                       variance_log_abs(sigma),
                       rho.value,
                       fourth_moment_log_abs(sigma),
                       rho.exact};
}

}  // namespace dgplab::logmoments
