#pragma once

// Data behind the four illustration figures: product histograms, tail
// probabilities against their log-normal predictions, and deep-GP path
// draws over an input grid. Emits plain numeric columns; rendering is out
// of scope. Identical (seed, config) reproduces identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgplab/dgp.hpp"
#include "dgplab/io.hpp"
#include "dgplab/montecarlo.hpp"
#include "dgplab/products.hpp"
#include "dgplab/rng.hpp"
#include "dgplab/signedlog.hpp"

#ifndef DGPLAB_GIT_DESCRIBE
#define DGPLAB_GIT_DESCRIBE "unversioned"
#endif

namespace dgplab::figures {

struct FigureOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct Column {
  std::string name;
  std::vector<double> values;
};

struct FigureData {
  std::string figure_id;
  std::vector<Column> columns;
  nlohmann::ordered_json meta;
};

namespace detail {

inline nlohmann::ordered_json base_meta(const FigureOptions& opt,
                                        nlohmann::ordered_json params) {
  nlohmann::ordered_json m;
  m["seed"] = opt.seed;
  m["n"] = opt.samples;
  m["params"] = std::move(params);
  m["git_describe"] = DGPLAB_GIT_DESCRIBE;
  return m;
}

// Per-depth event counts over the running log-magnitude of a growing
// product of iid N(0, sigma^2) factors. The same draws extend across all
// depths, so consecutive estimates are strongly coupled.
template <class Event>
std::vector<std::uint64_t> nested_event_counts(double sigma, int max_layers,
                                               std::uint64_t n,
                                               std::uint64_t seed,
                                               std::uint64_t stream,
                                               int threads, Event&& event) {
  const std::uint64_t n_chunks =
      (n + rng::default_chunk_items - 1) / rng::default_chunk_items;
  std::vector<std::vector<std::uint64_t>> partial(
      n_chunks, std::vector<std::uint64_t>(max_layers, 0));
  rng::for_each_chunk(n, threads, [&](std::uint64_t chunk, std::uint64_t lo,
                                      std::uint64_t hi) {
    rng::Stream rs(seed, stream, chunk);
    auto& local = partial[chunk];
    for (std::uint64_t i = lo; i < hi; ++i) {
      double log_sum = 0.0;
      for (int ell = 1; ell <= max_layers; ++ell) {
        const double x = sigma * rs.next_normal();
        log_sum += std::log(std::fabs(x));
        if (event(ell, log_sum)) ++local[ell - 1];
      }
    }
  });
  std::vector<std::uint64_t> counts(max_layers, 0);
  for (const auto& local : partial)
    for (int ell = 0; ell < max_layers; ++ell) counts[ell] += local[ell];
  return counts;
}

struct Histogram {
  std::vector<double> centers;
  std::vector<std::vector<double>> densities;  // one per series
  std::vector<std::uint64_t> dropped;          // out-of-range per series
  double lo = 0.0, hi = 0.0;
};

// 200 fixed bins on a symmetric range clipped at the 0.5% / 99.5%
// quantiles of the first (depth-1) series.
inline Histogram product_histograms(double sigma,
                                    const std::vector<int>& layer_set,
                                    const FigureOptions& opt,
                                    std::uint64_t stream0, int bins = 200) {
  Histogram h;
  bool first_series = true;
  for (std::size_t s = 0; s < layer_set.size(); ++s) {
    products::ProductConfig cfg{layer_set[s], sigma, 1};
    std::vector<double> vals(opt.samples);
    rng::for_each_chunk(
        opt.samples, opt.threads,
        [&](std::uint64_t chunk, std::uint64_t lo, std::uint64_t hi) {
          rng::Stream rs(opt.seed, stream0 + s, chunk);
          for (std::uint64_t i = lo; i < hi; ++i)
            vals[i] = products::sample_product(cfg, rs).to_real();
        });
    if (first_series) {
      std::vector<double> sorted = vals;
      std::sort(sorted.begin(), sorted.end());
      const auto q = [&](double p) {
        return sorted[static_cast<std::size_t>(p * (sorted.size() - 1))];
      };
      const double r = std::fmax(std::fabs(q(0.005)), std::fabs(q(0.995)));
      h.lo = -r;
      h.hi = r;
      h.centers.resize(bins);
      const double w = (h.hi - h.lo) / bins;
      for (int b = 0; b < bins; ++b) h.centers[b] = h.lo + (b + 0.5) * w;
      first_series = false;
    }
    const double w = (h.hi - h.lo) / bins;
    std::vector<std::uint64_t> count(bins, 0);
    std::uint64_t dropped = 0;
    for (double v : vals) {
      if (v < h.lo || v >= h.hi) {
        ++dropped;
        continue;
      }
      int b = static_cast<int>((v - h.lo) / w);
      if (b > bins - 1) b = bins - 1;  // rounding at the right edge
      ++count[b];
    }
    std::vector<double> dens(bins);
    for (int b = 0; b < bins; ++b)
      dens[b] = static_cast<double>(count[b]) /
                (static_cast<double>(opt.samples) * w);
    h.densities.push_back(std::move(dens));
    h.dropped.push_back(dropped);
  }
  return h;
}

inline FigureData histogram_figure(const std::string& id, double sigma,
                                   const FigureOptions& opt,
                                   std::uint64_t stream0) {
  const std::vector<int> layer_set{1, 10, 30};
  const auto h = product_histograms(sigma, layer_set, opt, stream0);
  FigureData f;
  f.figure_id = id;
  f.columns.push_back({"bin_center", h.centers});
  for (std::size_t s = 0; s < layer_set.size(); ++s)
    f.columns.push_back(
        {"density_l" + std::to_string(layer_set[s]), h.densities[s]});
  nlohmann::ordered_json params;
  params["sigma"] = sigma;
  params["layers"] = layer_set;
  params["bins"] = 200;
  params["clip_lo"] = h.lo;
  params["clip_hi"] = h.hi;
  params["dropped"] = h.dropped;
  f.meta = base_meta(opt, std::move(params));
  return f;
}

inline FigureData paths_figure(const std::string& id, double sigma,
                               const FigureOptions& opt,
                               std::uint64_t stream) {
  constexpr int n_paths = 5;
  constexpr int n_layers = 30;
  constexpr int n_grid = 401;
  dgp::DgpSpec spec;
  spec.first = {0.0, 1, sigma};
  spec.layers.assign(n_layers - 1, dgp::LayerKernel{sigma, 1});
  rng::Stream rs(opt.seed, stream, 0);
  std::vector<dgp::DgpPath> paths;
  paths.reserve(n_paths);
  for (int p = 0; p < n_paths; ++p) paths.push_back(dgp::sample_path(spec, rs));

  FigureData f;
  f.figure_id = id;
  std::vector<double> xs(n_grid);
  for (int i = 0; i < n_grid; ++i) xs[i] = -2.0 + 0.01 * i;
  f.columns.push_back({"x", xs});
  for (int p = 0; p < n_paths; ++p) {
    std::vector<double> sign(n_grid), logmag(n_grid), value(n_grid);
    for (int i = 0; i < n_grid; ++i) {
      const SignedLog v = dgp::eval_path_product(spec, paths[p], xs[i]);
      sign[i] = v.sign;
      logmag[i] = v.log_mag;
      value[i] = v.to_real_clamped();
    }
    const std::string base = "path" + std::to_string(p + 1);
    f.columns.push_back({base + "_sign", std::move(sign)});
    f.columns.push_back({base + "_logmag", std::move(logmag)});
    f.columns.push_back({base + "_value", std::move(value)});
  }
  nlohmann::ordered_json params;
  params["sigma"] = sigma;
  params["layers"] = n_layers;
  params["kernel"] = "linear";
  params["paths"] = n_paths;
  params["x_min"] = -2.0;
  params["x_max"] = 2.0;
  params["grid_points"] = n_grid;
  f.meta = base_meta(opt, std::move(params));
  f.meta["n"] = n_paths;  // five function draws, not opt.samples
  return f;
}

}  // namespace detail

inline FigureData figure_data(const std::string& id,
                              const FigureOptions& opt = {}) {
  const double log_half = std::log(0.5);
  if (id == "1a") return detail::histogram_figure(id, 1.0, opt,
                                                  rng::streams::figure_base);
  if (id == "3a") return detail::histogram_figure(id, 3.0, opt,
                                                  rng::streams::figure_base + 30);

  if (id == "1b") {
    constexpr int max_layers = 30;
    const std::vector<double> sigmas{2.0, 2.5, 3.0};
    FigureData f;
    f.figure_id = id;
    std::vector<double> ells(max_layers);
    for (int l = 0; l < max_layers; ++l) ells[l] = l + 1;
    f.columns.push_back({"ell", ells});
    for (std::size_t s = 0; s < sigmas.size(); ++s) {
      const auto counts = detail::nested_event_counts(
          sigmas[s], max_layers, opt.samples, opt.seed,
          rng::streams::figure_base + 10 + s, opt.threads,
          [&](int, double log_sum) { return log_sum <= log_half; });
      std::vector<double> p(max_layers), se(max_layers);
      for (int l = 0; l < max_layers; ++l) {
        const auto est = montecarlo::prob_from_count(counts[l], opt.samples);
        p[l] = est.p_hat;
        se[l] = est.se;
      }
      std::ostringstream tag;
      tag << "sigma_" << sigmas[s];
      f.columns.push_back({"p_" + tag.str(), std::move(p)});
      f.columns.push_back({"se_" + tag.str(), std::move(se)});
    }
    nlohmann::ordered_json params;
    params["sigmas"] = sigmas;
    params["max_layers"] = max_layers;
    params["event"] = "prod_abs <= 0.5";
    f.meta = detail::base_meta(opt, std::move(params));
    return f;
  }

  if (id == "2a" || id == "2b") {
    constexpr int max_layers = 30;
    const double sigma = 1.0;
    const double m = logmoments::mean_log_abs(sigma);
    const double s_log = std::sqrt(logmoments::log_abs_variance);
    // scaled product (prod |X_i| / e^{l E log|X|})^(1/sqrt(l)) > 1/2
    const auto counts = detail::nested_event_counts(
        sigma, max_layers, opt.samples, opt.seed,
        rng::streams::figure_base + 20, opt.threads,
        [&](int ell, double log_sum) {
          return log_sum - ell * m > std::sqrt(double(ell)) * log_half;
        });
    const double p_lognormal =
        1.0 - specfun::normal_cdf(log_half / s_log);
    FigureData f;
    f.figure_id = id;
    std::vector<double> ells(max_layers), p(max_layers), se(max_layers),
        pl(max_layers), bound(max_layers), blo(max_layers), bhi(max_layers);
    for (int l = 0; l < max_layers; ++l) {
      ells[l] = l + 1;
      const auto est = montecarlo::prob_from_count(counts[l], opt.samples);
      p[l] = est.p_hat;
      se[l] = est.se;
      pl[l] = p_lognormal;
      bound[l] = products::be_bound_iid({l + 1, sigma, 1});
      blo[l] = p_lognormal - bound[l];
      bhi[l] = p_lognormal + bound[l];
    }
    f.columns.push_back({"ell", ells});
    f.columns.push_back({"p_empirical", p});
    f.columns.push_back({"se", se});
    f.columns.push_back({"p_lognormal", pl});
    if (id == "2a") {
      f.columns.push_back({"bound", bound});
      f.columns.push_back({"band_lo", blo});
      f.columns.push_back({"band_hi", bhi});
    }
    nlohmann::ordered_json params;
    params["sigma"] = sigma;
    params["max_layers"] = max_layers;
    params["event"] = "scaled_prod > 0.5";
    params["scale"] = id == "2b" ? "log" : "linear";
    f.meta = detail::base_meta(opt, std::move(params));
    return f;
  }

  if (id == "3b") {
    constexpr int max_layers = 30;
    const double sigma = 3.0;
    const auto counts = detail::nested_event_counts(
        sigma, max_layers, opt.samples, opt.seed,
        rng::streams::figure_base + 40, opt.threads,
        [&](int, double log_sum) { return log_sum > log_half; });
    FigureData f;
    f.figure_id = id;
    std::vector<double> ells(max_layers), p(max_layers), se(max_layers),
        ps(max_layers);
    for (int l = 0; l < max_layers; ++l) {
      ells[l] = l + 1;
      const auto est = montecarlo::prob_from_count(counts[l], opt.samples);
      p[l] = est.p_hat;
      se[l] = est.se;
      const auto law = products::surrogate_product_law({l + 1, sigma, 1});
      ps[l] = 1.0 - products::surrogate_cdf(law, false, 0.5);
    }
    f.columns.push_back({"ell", ells});
    f.columns.push_back({"p_empirical", p});
    f.columns.push_back({"se", se});
    f.columns.push_back({"p_surrogate", ps});
    nlohmann::ordered_json params;
    params["sigma"] = sigma;
    params["max_layers"] = max_layers;
    params["event"] = "prod_abs > 0.5";
    f.meta = detail::base_meta(opt, std::move(params));
    return f;
  }

  if (id == "4a") return detail::paths_figure(id, 1.0, opt,
                                              rng::streams::figure_base + 50);
  if (id == "4b") return detail::paths_figure(id, 2.5, opt,
                                              rng::streams::figure_base + 51);

  throw std::domain_error("figure_data: unknown figure id \"" + id + "\"");
}

inline std::string to_csv(const FigureData& f) {
  std::string out;
  for (std::size_t c = 0; c < f.columns.size(); ++c) {
    if (c) out += ',';
    out += f.columns[c].name;
  }
  out += '\n';
  const std::size_t rows = f.columns.empty() ? 0 : f.columns[0].values.size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < f.columns.size(); ++c) {
      if (c) out += ',';
      out += io::format_number(f.columns[c].values[r]);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json(const FigureData& f) {
  nlohmann::ordered_json j;
  if (!f.figure_id.empty()) j["figure_id"] = f.figure_id;
  if (!f.meta.is_null()) j["meta"] = f.meta;
  auto& cols = j["columns"] = nlohmann::ordered_json::object();
  for (const auto& c : f.columns) cols[c.name] = c.values;
  return j;
}

}  // namespace dgplab::figures
