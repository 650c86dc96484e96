#pragma once

// The log-normal surrogate S e^Y (g1(x))^(c1) of a polynomial-kernel DGP:
// surrogate parameters, the non-identically-distributed Berry-Esseen
// distance bound, medians, the collapse/divergence threshold, and the
// all-degrees-2 report that places direct coefficient sums next to the
// closed forms quoted for that case (they disagree; the report flags it).

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgplab/dgp.hpp"
#include "dgplab/logmoments.hpp"
#include "dgplab/rng.hpp"
#include "dgplab/signedlog.hpp"

namespace dgplab::surrogate {

struct SurrogateLaw {
  double mu_y = 0.0;   // sum_{i>=2} c_i E log|Y_i|
  double var_y = 0.0;  // sum_{i>=2} c_i^2 Var log|Y_i| = (pi^2/8) sum c_i^2
  double c1 = 1.0;
  dgp::FirstLayerKernel first;
  std::vector<double> exponents;  // c_2 .. c_l
};

struct BeBound {
  double value = 0.0;    // 0.56 * sum_rho / sum_var^(3/2)
  double sum_var = 0.0;  // sum c_i^2 Var log|Y_i|
  double sum_rho = 0.0;  // sum c_i^3 E|log|Y_i||^3
  bool rho_fallback = false;  // some rho_i came from quadrature
};

namespace detail {
inline void require_depth(const dgp::DgpSpec& spec, const char* who) {
  if (spec.depth() < 2)
    throw std::domain_error(std::string(who) + ": requires depth >= 2");
}
}  // namespace detail

inline SurrogateLaw surrogate_params(const dgp::DgpSpec& spec) {
  detail::require_depth(spec, "surrogate_params");
  const auto c = dgp::composition_exponents(spec);
  SurrogateLaw law;
  law.c1 = c[0];
  law.first = spec.first;
  law.exponents.assign(c.begin() + 1, c.end());
  for (std::size_t i = 0; i < law.exponents.size(); ++i) {
    const double ci = law.exponents[i];
    law.mu_y += ci * logmoments::mean_log_abs(spec.layers[i].sigma);
    law.var_y += ci * ci * logmoments::log_abs_variance;
  }
  return law;
}

// Bound from an explicit exponent/sigma pairing (i = 2..l); shared by
// be_bound_noniid and the homogeneity tests.
inline BeBound be_bound_from(std::span<const double> exponents,
                             std::span<const double> sigmas,
                             specfun::SeriesTruncation trunc = {}) {
  if (exponents.size() != sigmas.size() || exponents.empty())
    throw std::invalid_argument("be_bound_from: need matching nonempty spans");
  BeBound b;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const double ci = exponents[i];
    const auto rho = logmoments::abs_third_moment(sigmas[i], trunc);
    b.sum_var += ci * ci * logmoments::log_abs_variance;
    b.sum_rho += ci * ci * ci * rho.value;
    if (!rho.exact) b.rho_fallback = true;
  }
  b.value = 0.56 * b.sum_rho / std::pow(b.sum_var, 1.5);
  return b;
}

inline BeBound be_bound_noniid(const dgp::DgpSpec& spec,
                               specfun::SeriesTruncation trunc = {}) {
  detail::require_depth(spec, "be_bound_noniid");
  const auto c = dgp::composition_exponents(spec);
  std::vector<double> sigmas;
  sigmas.reserve(spec.layers.size());
  for (const auto& l : spec.layers) sigmas.push_back(l.sigma);
  return be_bound_from(std::span(c).subspan(1), sigmas, trunc);
}

// One draw of S e^Y (g1(x))^(c1): fair sign, Y ~ N(mu_y, var_y), fresh
// first-layer draws. g1(x) = 0 maps to the exact-zero encoding.
inline SignedLog sample_surrogate(const dgp::DgpSpec& spec, double x,
                                  rng::Stream& rs) {
  const SurrogateLaw law = surrogate_params(spec);
  const double sd = std::sqrt(law.var_y);
  const int s = rs.fair_sign();
  const double y = law.mu_y + sd * rs.next_normal();
  std::vector<double> z(spec.first.degree + 1);
  for (auto& zi : z) zi = rs.next_normal();
  const double g1 = dgp::eval_first_layer(spec.first, z, x);
  if (g1 == 0.0) return SignedLog::zero();
  int sign = s;
  if (g1 < 0.0 && dgp::detail::is_odd(law.c1)) sign = -sign;
  return {sign, y + law.c1 * std::log(std::fabs(g1))};
}

inline std::vector<SignedLog> sample_surrogates(
    const dgp::DgpSpec& spec, double x, std::uint64_t n, std::uint64_t seed,
    int threads = 0, std::uint64_t stream = rng::streams::dgp_surrogate) {
  const SurrogateLaw law = surrogate_params(spec);
  const double sd = std::sqrt(law.var_y);
  std::vector<SignedLog> out(n);
  rng::for_each_chunk(n, threads, [&](std::uint64_t chunk, std::uint64_t lo,
                                      std::uint64_t hi) {
    rng::Stream rs(seed, stream, chunk);
    std::vector<double> z(spec.first.degree + 1);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const int s = rs.fair_sign();
      const double y = law.mu_y + sd * rs.next_normal();
      for (auto& zi : z) zi = rs.next_normal();
      const double g1 = dgp::eval_first_layer(spec.first, z, x);
      if (g1 == 0.0) {
        out[i] = SignedLog::zero();
        continue;
      }
      int sign = s;
      if (g1 < 0.0 && dgp::detail::is_odd(law.c1)) sign = -sign;
      out[i] = SignedLog{sign, y + law.c1 * std::log(std::fabs(g1))};
    }
  });
  return out;
}

// Exact log-normal median of e^Y.
inline double median_dgp_surrogate(const dgp::DgpSpec& spec) {
  detail::require_depth(spec, "median_dgp_surrogate");
  return std::exp(surrogate_params(spec).mu_y);
}

// sigma* = exp((gamma + log 2)/2); below it the surrogate median collapses
// to zero with depth, above it diverges.
inline double threshold_sigma() {
  return std::exp(0.5 * (specfun::constants.euler_gamma + M_LN2));
}

// ---- all-degrees-2 report --------------------------------------------

struct D2Report {
  int ell = 0;
  double sigma = 0.0;
  dgp::ExponentPolicy policy = dgp::ExponentPolicy::multiplicative;
  std::vector<double> exponents;  // c_1 .. c_l

  struct Direct {
    double sum_c = 0.0, sum_c2 = 0.0, sum_c3 = 0.0;    // over i = 2..l
    double sum_c_full = 0.0, sum_c2_full = 0.0, sum_c3_full = 0.0;  // 1..l
    double mu_y = 0.0, var_y = 0.0, be_bound = 0.0;
  } direct;

  struct ClosedForm {
    double sum_c = 0.0;   // l(l-1) - 1
    double sum_c2 = 0.0;  // 2l(l-1)(2l-1)/3 - 3
    double sum_c3 = 0.0;  // 2l^2(l-1)^2 - 7
    double mu_y = 0.0, var_y = 0.0, be_bound = 0.0;
    double be_bound_simple = 0.0;  // 3 l^(-1/2) rho / var^(3/2)
  } paper_closed_form;

  std::vector<std::string> flags;
};

inline D2Report d2_report(int ell, double sigma, dgp::ExponentPolicy policy,
                          specfun::SeriesTruncation trunc = {}) {
  if (ell < 3) throw std::domain_error("d2_report: ell >= 3");
  if (!(sigma > 0.0)) throw std::domain_error("d2_report: sigma > 0");
  dgp::DgpSpec spec;
  spec.first = {0.0, 2, 1.0};
  spec.layers.assign(ell - 1, dgp::LayerKernel{sigma, 2});
  spec.policy = policy;

  D2Report r;
  r.ell = ell;
  r.sigma = sigma;
  r.policy = policy;
  r.exponents = dgp::composition_exponents(spec);

  for (std::size_t i = 0; i < r.exponents.size(); ++i) {
    const double c = r.exponents[i];
    r.direct.sum_c_full += c;
    r.direct.sum_c2_full += c * c;
    r.direct.sum_c3_full += c * c * c;
    if (i >= 1) {
      r.direct.sum_c += c;
      r.direct.sum_c2 += c * c;
      r.direct.sum_c3 += c * c * c;
    }
  }
  const SurrogateLaw law = surrogate_params(spec);
  const BeBound bound = be_bound_noniid(spec, trunc);
  r.direct.mu_y = law.mu_y;
  r.direct.var_y = law.var_y;
  r.direct.be_bound = bound.value;

  const double L = ell;
  const double rho = logmoments::abs_third_moment(sigma, trunc).value;
  const double v = logmoments::log_abs_variance;
  auto& cf = r.paper_closed_form;
  cf.sum_c = L * (L - 1.0) - 1.0;
  cf.sum_c2 = 2.0 * L * (L - 1.0) * (2.0 * L - 1.0) / 3.0 - 3.0;
  cf.sum_c3 = 2.0 * L * L * (L - 1.0) * (L - 1.0) - 7.0;
  cf.mu_y = cf.sum_c * logmoments::mean_log_abs(sigma);
  cf.var_y = v * cf.sum_c2;
  cf.be_bound = 0.56 * (rho / std::pow(v, 1.5)) *
                (2.0 * L * L * (L - 1.0) * (L - 1.0) - 7.0) *
                std::pow(3.0, 1.5) /
                std::pow(2.0 * L * (L - 1.0) * (2.0 * L - 1.0) - 9.0, 1.5);
  cf.be_bound_simple = 3.0 / std::sqrt(L) * rho / std::pow(v, 1.5);

  auto flag = [&](const char* name, double direct, double closed) {
    const double denom = std::fmax(std::fabs(closed), 1e-300);
    if (std::fabs(direct - closed) / denom > 1e-9) {
      r.flags.push_back(std::string(name) + ": direct " +
                        std::to_string(direct) + " != closed form " +
                        std::to_string(closed));
    }
  };
  flag("sum_c", r.direct.sum_c, cf.sum_c);
  flag("sum_c2", r.direct.sum_c2, cf.sum_c2);
  flag("sum_c3", r.direct.sum_c3, cf.sum_c3);
  flag("mu_y", r.direct.mu_y, cf.mu_y);
  flag("var_y", r.direct.var_y, cf.var_y);
  flag("be_bound", r.direct.be_bound, cf.be_bound);
  return r;
}

inline nlohmann::ordered_json to_json(const D2Report& r) {
  nlohmann::ordered_json j;
  j["ell"] = r.ell;
  j["sigma"] = r.sigma;
  j["policy"] = dgp::to_string(r.policy);
  j["exponents"] = r.exponents;
  j["direct"] = {{"sum_c", r.direct.sum_c},
                 {"sum_c2", r.direct.sum_c2},
                 {"sum_c3", r.direct.sum_c3},
                 {"sum_c_full", r.direct.sum_c_full},
                 {"sum_c2_full", r.direct.sum_c2_full},
                 {"sum_c3_full", r.direct.sum_c3_full},
                 {"mu_y", r.direct.mu_y},
                 {"var_y", r.direct.var_y},
                 {"be_bound", r.direct.be_bound}};
  j["paper_closed_form"] = {{"sum_c", r.paper_closed_form.sum_c},
                            {"sum_c2", r.paper_closed_form.sum_c2},
                            {"sum_c3", r.paper_closed_form.sum_c3},
                            {"mu_y", r.paper_closed_form.mu_y},
                            {"var_y", r.paper_closed_form.var_y},
                            {"be_bound", r.paper_closed_form.be_bound},
                            {"be_bound_simple",
                             r.paper_closed_form.be_bound_simple}};
  j["flags"] = r.flags;
  return j;
}

}  // namespace dgplab::surrogate
