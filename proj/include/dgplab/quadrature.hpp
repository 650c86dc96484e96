#pragma once

// Tanh-sinh quadrature on a finite interval. Used as the in-library
// fallback for moment integrals outside the closed-form region; endpoint
// log-power singularities are exactly what this rule is good at.

#include <cmath>
#include <limits>

namespace dgplab::quadrature {

namespace detail {

// Sum of weighted f over the nodes t = j*h, j = j0, j0+step, ... The
// abscissa's distance from each endpoint is carried explicitly so the
// integrand can be evaluated arbitrarily close to a singular endpoint.
template <class F>
double level_sum(F& f, double a, double b, double h, int j0, int step,
                 double term_floor) {
  const double half = 0.5 * (b - a);
  const double pi_half = 1.57079632679489661923132169163975144;
  double sum = 0.0;
  int quiet = 0;
  for (int j = j0;; j += step) {
    const double t = j * h;
    if (t > 6.5) break;
    const double sh = pi_half * std::sinh(t);
    const double e = std::exp(-2.0 * sh);
    const double off = e / (1.0 + e);  // (1 - tanh(sh)) / 2
    const double ch = std::cosh(sh);
    const double w = pi_half * std::cosh(t) / (ch * ch);
    if (2.0 * half * off <= std::numeric_limits<double>::min()) break;
    double term;
    if (j == 0) {
      term = w * f(a + half);
    } else {
      term = w * (f(a + 2.0 * half * off) + f(b - 2.0 * half * off));
    }
    sum += term;
    if (std::abs(term) < term_floor) {
      if (++quiet > 6) break;
    } else {
      quiet = 0;
    }
  }
  return sum;
}

}  // namespace detail

template <class F>
double tanh_sinh(F&& f, double a, double b, double abs_tol = 1e-10,
                 int max_level = 12) {
  const double half = 0.5 * (b - a);
  const double floor = abs_tol * 1e-4;
  double h = 1.0;
  double result = half * h * detail::level_sum(f, a, b, h, 0, 1, floor);
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    const double add = detail::level_sum(f, a, b, h, 1, 2, floor);
    const double next = 0.5 * result + half * h * add;
    const double err = std::abs(next - result);
    result = next;
    if (level >= 4 && err < abs_tol) break;
  }
  return result;
}

}  // namespace dgplab::quadrature
