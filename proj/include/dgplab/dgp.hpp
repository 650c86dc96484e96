#pragma once

// Exact representation and sampling of polynomial-kernel deep GP priors on
// the real line. The first layer is the binomial feature map of
// k1(x,y) = scale^2 (xy + c)^d1; later layers are g_i(v) = Y_i v^{d_i} with
// Y_i ~ N(0, sigma_i^2). A flattened product evaluator (exponent vector)
// and a literal layer-by-layer evaluator are both provided; the recursive
// one is the ground truth that arbitrates the exponent policy.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgplab/rng.hpp"
#include "dgplab/signedlog.hpp"

namespace dgplab::dgp {

struct FirstLayerKernel {
  double c = 0.0;
  int degree = 1;
  double scale = 1.0;
};

struct LayerKernel {
  double sigma = 1.0;
  int degree = 1;
};

enum class ExponentPolicy { multiplicative, paper_additive };

struct DgpSpec {
  FirstLayerKernel first;
  std::vector<LayerKernel> layers;  // layers 2..l
  ExponentPolicy policy = ExponentPolicy::multiplicative;

  int depth() const { return 1 + static_cast<int>(layers.size()); }
};

struct DgpPath {
  std::vector<double> z;  // first-layer draws, degree+1 standard normals
  std::vector<double> y;  // later-layer draws, y[i] ~ N(0, sigma_{i+2}^2)
};

namespace detail {

inline void validate(const FirstLayerKernel& f) {
  if (f.degree < 1) throw std::domain_error("FirstLayerKernel: degree >= 1");
  if (!(f.c >= 0.0)) throw std::domain_error("FirstLayerKernel: c >= 0");
  if (!(f.scale > 0.0)) throw std::domain_error("FirstLayerKernel: scale > 0");
}

inline void validate(const DgpSpec& spec) {
  validate(spec.first);
  for (const auto& l : spec.layers) {
    if (l.degree < 1) throw std::domain_error("LayerKernel: degree >= 1");
    if (!(l.sigma > 0.0)) throw std::domain_error("LayerKernel: sigma > 0");
  }
}

inline double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

inline bool is_odd(double integer_valued) {
  return std::fmod(integer_valued, 2.0) != 0.0;
}

}  // namespace detail

// phi_i(x) = scale * C(d,i)^(1/2) x^(d-i) c^(i/2), i = 0..d.
inline std::vector<double> feature_map(const FirstLayerKernel& first,
                                       double x) {
  detail::validate(first);
  const int d = first.degree;
  std::vector<double> phi(d + 1);
  for (int i = 0; i <= d; ++i) {
    phi[i] = first.scale * std::sqrt(detail::binomial(d, i)) *
             std::pow(x, d - i) * std::pow(first.c, 0.5 * i);
  }
  return phi;
}

// g1(x) = sum_i z_i phi_i(x).
inline double eval_first_layer(const FirstLayerKernel& first,
                               std::span<const double> z, double x) {
  const auto phi = feature_map(first, x);
  if (z.size() != phi.size())
    throw std::invalid_argument("eval_first_layer: draw/feature length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) acc += z[i] * phi[i];
  return acc;
}

// Exponent vector (c_1 .. c_l). c_l = 1; below it either the running
// product of later degrees (what literal composition produces) or the
// running sum (the convention stated alongside the approximation theorem).
inline std::vector<double> composition_exponents(const DgpSpec& spec) {
  detail::validate(spec);
  const int l = spec.depth();
  std::vector<double> c(l, 1.0);
  if (spec.policy == ExponentPolicy::multiplicative) {
    for (int i = l - 2; i >= 0; --i)
      c[i] = c[i + 1] * spec.layers[i].degree;  // d_{i+2}
  } else {
    double run = 0.0;
    for (int i = l - 2; i >= 0; --i) {
      run += spec.layers[i].degree;
      c[i] = run;
    }
  }
  // sign parity of y^c needs c exact in a double
  if (c[0] >= 9007199254740992.0)
    throw std::domain_error(
        "composition_exponents: exponents exceed exact integer range");
  return c;
}

inline DgpPath sample_path(const DgpSpec& spec, rng::Stream& rs) {
  detail::validate(spec);
  DgpPath p;
  p.z.resize(spec.first.degree + 1);
  for (auto& z : p.z) z = rs.next_normal();
  p.y.resize(spec.layers.size());
  for (std::size_t i = 0; i < p.y.size(); ++i)
    p.y[i] = spec.layers[i].sigma * rs.next_normal();
  return p;
}

// Flattened evaluation: sign = prod sign(y_i)^(c_i) * sign(g1)^(c_1),
// log-magnitude = sum c_i log|y_i| + c_1 log|g1(x)|.
inline SignedLog eval_path_product(const DgpSpec& spec, const DgpPath& path,
                                   double x) {
  if (path.y.size() != spec.layers.size())
    throw std::invalid_argument("eval_path_product: path/spec mismatch");
  const auto c = composition_exponents(spec);
  const double g1 = eval_first_layer(spec.first, path.z, x);
  if (g1 == 0.0) return SignedLog::zero();
  int sign = (g1 < 0.0 && detail::is_odd(c[0])) ? -1 : 1;
  double log_mag = c[0] * std::log(std::fabs(g1));
  for (std::size_t i = 0; i < path.y.size(); ++i) {
    const double y = path.y[i];
    if (y == 0.0) return SignedLog::zero();
    const double ci = c[i + 1];
    if (y < 0.0 && detail::is_odd(ci)) sign = -sign;
    log_mag += ci * std::log(std::fabs(y));
  }
  return {sign, log_mag};
}

// Literal composition v <- g1(x); v <- y_i v^(d_i), entirely in SignedLog
// arithmetic. Ground truth for the exponent policies.
inline SignedLog eval_path_recursive(const DgpSpec& spec, const DgpPath& path,
                                     double x) {
  if (path.y.size() != spec.layers.size())
    throw std::invalid_argument("eval_path_recursive: path/spec mismatch");
  detail::validate(spec);
  SignedLog v = SignedLog::from_real(eval_first_layer(spec.first, path.z, x));
  for (std::size_t i = 0; i < path.y.size(); ++i) {
    v = SignedLog::from_real(path.y[i]) * v.pow_int(spec.layers[i].degree);
  }
  return v;
}

// Batch sampling of DGP values at a fixed input.
inline std::vector<SignedLog> sample_values(
    const DgpSpec& spec, double x, std::uint64_t n, std::uint64_t seed,
    int threads = 0, std::uint64_t stream = rng::streams::dgp_path) {
  detail::validate(spec);
  std::vector<SignedLog> out(n);
  rng::for_each_chunk(n, threads, [&](std::uint64_t chunk, std::uint64_t lo,
                                      std::uint64_t hi) {
    rng::Stream rs(seed, stream, chunk);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const DgpPath p = sample_path(spec, rs);
      out[i] = eval_path_product(spec, p, x);
    }
  });
  return out;
}

// --- JSON wire format -------------------------------------------------
// {"first": {"c": real, "degree": int, "scale": real},
//  "layers": [{"sigma": real, "degree": int}, ...],
//  "exponent_policy": "multiplicative" | "paper_additive"}
// Unknown fields are rejected; "scale" and "exponent_policy" may be
// omitted and default to 1 and "multiplicative".

inline const char* to_string(ExponentPolicy p) {
  return p == ExponentPolicy::multiplicative ? "multiplicative"
                                             : "paper_additive";
}

inline ExponentPolicy policy_from_string(const std::string& s) {
  if (s == "multiplicative") return ExponentPolicy::multiplicative;
  if (s == "paper_additive") return ExponentPolicy::paper_additive;
  throw std::invalid_argument("unknown exponent_policy: " + s);
}

inline nlohmann::ordered_json to_json(const DgpSpec& spec) {
  nlohmann::ordered_json j;
  j["first"] = {{"c", spec.first.c},
                {"degree", spec.first.degree},
                {"scale", spec.first.scale}};
  j["layers"] = nlohmann::ordered_json::array();
  for (const auto& l : spec.layers)
    j["layers"].push_back({{"sigma", l.sigma}, {"degree", l.degree}});
  j["exponent_policy"] = to_string(spec.policy);
  return j;
}

namespace detail {
template <class J>
inline void reject_unknown_fields(const J& j,
                                  std::initializer_list<const char*> known,
                                  const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok)
      throw std::invalid_argument(std::string("unknown field \"") + it.key() +
                                  "\" in " + where);
  }
}
}  // namespace detail

inline DgpSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("spec: expected object");
  detail::reject_unknown_fields(j, {"first", "layers", "exponent_policy"},
                                "spec");
  if (!j.contains("first") || !j.contains("layers"))
    throw std::invalid_argument("spec: \"first\" and \"layers\" required");
  DgpSpec spec;
  const auto& jf = j.at("first");
  if (!jf.is_object()) throw std::invalid_argument("spec.first: expected object");
  detail::reject_unknown_fields(jf, {"c", "degree", "scale"}, "first");
  spec.first.c = jf.at("c").get<double>();
  spec.first.degree = jf.at("degree").get<int>();
  spec.first.scale = jf.value("scale", 1.0);
  const auto& jl = j.at("layers");
  if (!jl.is_array()) throw std::invalid_argument("spec.layers: expected array");
  for (const auto& je : jl) {
    detail::reject_unknown_fields(je, {"sigma", "degree"}, "layers[]");
    LayerKernel l;
    l.sigma = je.at("sigma").get<double>();
    l.degree = je.at("degree").get<int>();
    spec.layers.push_back(l);
  }
  spec.policy = policy_from_string(j.value("exponent_policy",
                                           std::string("multiplicative")));
  detail::validate(spec);
  return spec;
}

}  // namespace dgplab::dgp
