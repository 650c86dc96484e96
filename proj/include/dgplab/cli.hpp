#pragma once

// Command-line front end. Every capability is reachable with a
// reproducible seed and machine-readable output. Exit codes:
//   0 success, 2 usage error, 3 domain error, 4 verification failure
//   (a compare whose distance exceeded bound + slack).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgplab/dgp.hpp"
#include "dgplab/figures.hpp"
#include "dgplab/io.hpp"
#include "dgplab/logmoments.hpp"
#include "dgplab/montecarlo.hpp"
#include "dgplab/products.hpp"
#include "dgplab/rng.hpp"
#include "dgplab/signedlog.hpp"
#include "dgplab/surrogate.hpp"

namespace dgplab::cli {

namespace detail {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_domain = 3;
inline constexpr int exit_verification = 4;

struct CommonOpts {
  std::uint64_t seed = 0;
  int threads = 0;
  std::uint64_t samples = 1'000'000;
  std::string format;
  std::string out;
};

inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << text;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

inline std::string json_value_to_cell(const nlohmann::ordered_json& v) {
  if (v.is_number_float()) return io::format_number(v.get<double>());
  if (v.is_number_integer()) return io::format_integer(v.get<std::int64_t>());
  if (v.is_number_unsigned())
    return io::format_integer(
        static_cast<std::int64_t>(v.get<std::uint64_t>()));
  if (v.is_string()) return csv_quote(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return csv_quote(v.dump());
}

// A scalar report: JSON object by default, one-row CSV on request.
inline void emit_report(const nlohmann::ordered_json& j,
                        const CommonOpts& opt) {
  const std::string fmt = opt.format.empty() ? "json" : opt.format;
  if (fmt == "json") {
    write_text(opt.out, j.dump(2) + "\n");
    return;
  }
  std::string header, row;
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) {
      header += ',';
      row += ',';
    }
    header += it.key();
    row += json_value_to_cell(it.value());
    first = false;
  }
  write_text(opt.out, header + "\n" + row + "\n");
}

// A column table: CSV by default, JSON mirror on request.
inline void emit_table(const figures::FigureData& t, const CommonOpts& opt) {
  const std::string fmt = opt.format.empty() ? "csv" : opt.format;
  if (fmt == "csv") {
    write_text(opt.out, figures::to_csv(t));
  } else {
    write_text(opt.out, figures::to_json(t).dump(2) + "\n");
  }
}

inline nlohmann::ordered_json ks_to_json(const montecarlo::KsReport& r) {
  nlohmann::ordered_json j;
  j["distance"] = r.distance;
  j["bound"] = r.bound;
  j["slack"] = r.slack;
  j["n_a"] = r.n_a;
  j["n_b"] = r.n_b;
  j["grid_points"] = r.grid_points;
  j["verdict"] = r.pass ? "pass" : "fail";
  return j;
}

// "A:B:STEP", inclusive of B when (B-A)/STEP is integral within 1e-9.
inline std::vector<double> parse_x_grid(const std::string& s) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
  if (parts.size() != 3)
    throw std::invalid_argument("--x-grid expects A:B:STEP");
  const double a = parts[0], b = parts[1], step = parts[2];
  if (!(step > 0.0) || b < a)
    throw std::invalid_argument("--x-grid requires STEP > 0 and B >= A");
  const double span = (b - a) / step;
  const double k = std::round(span);
  std::vector<double> xs;
  if (std::fabs(span - k) < 1e-9) {
    for (int i = 0; i < static_cast<int>(k); ++i) xs.push_back(a + i * step);
    xs.push_back(b);
  } else {
    for (int i = 0; i <= static_cast<int>(span); ++i)
      xs.push_back(a + i * step);
  }
  return xs;
}

inline dgp::DgpSpec load_spec_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read spec file: " + path);
  nlohmann::json j = nlohmann::json::parse(f);
  return dgp::spec_from_json(j);
}

inline figures::FigureData samples_table(const std::vector<SignedLog>& v) {
  figures::FigureData t;
  std::vector<double> sign(v.size()), logmag(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    sign[i] = v[i].sign;
    logmag[i] = v[i].log_mag;
  }
  t.columns.push_back({"value_sign", std::move(sign)});
  t.columns.push_back({"value_logmag", std::move(logmag)});
  return t;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args) {
  using detail::CommonOpts;
  CLI::App app{"deep GP prior products: exact sampling, log-normal "
               "surrogates, distance bounds, figure data"};
  app.set_version_flag("--version", DGPLAB_GIT_DESCRIBE);
  app.require_subcommand(1);

  CommonOpts opt;
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", opt.seed, "RNG seed (default 0)")
        ->envname("DGPLAB_SEED");
  };
  auto add_threads = [&](CLI::App* c) {
    c->add_option("--threads", opt.threads,
                  "worker cap; never changes results")
        ->check(CLI::PositiveNumber);
  };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_out = [&](CLI::App* c) {
    c->add_option("--out", opt.out, "output file (default stdout)");
  };

  // moments
  double sigma = 1.0;
  std::string method = "closed";
  auto* c_moments = app.add_subcommand(
      "moments", "log-moment table of log|X| for X ~ N(0, sigma^2)");
  c_moments->add_option("--sigma", sigma, "standard deviation")
      ->required()
      ->check(CLI::PositiveNumber);
  c_moments
      ->add_option("--method", method,
                   "abs-third-moment route: closed (falls back below the "
                   "validity region) or quadrature (forced)")
      ->check(CLI::IsMember({"closed", "quadrature"}));
  add_format(c_moments);
  add_out(c_moments);

  // be-bound
  int layers = 1;
  int alpha = 1;
  auto* c_bebound = app.add_subcommand(
      "be-bound", "uniform distance bound for the iid product surrogate");
  c_bebound->add_option("--layers", layers, "number of factors")
      ->required()
      ->check(CLI::PositiveNumber);
  c_bebound->add_option("--sigma", sigma, "factor standard deviation")
      ->required()
      ->check(CLI::PositiveNumber);
  c_bebound->add_option("--alpha", alpha, "integer power (cancels)")
      ->check(CLI::PositiveNumber);
  add_format(c_bebound);
  add_out(c_bebound);

  // product sample|compare
  auto* c_product = app.add_subcommand("product",
                                       "products of iid centered Gaussians");
  c_product->require_subcommand(1);
  int grid = montecarlo::default_grid_points;
  auto add_product_opts = [&](CLI::App* c) {
    c->add_option("--layers", layers)->required()->check(CLI::PositiveNumber);
    c->add_option("--sigma", sigma)->required()->check(CLI::PositiveNumber);
    c->add_option("--alpha", alpha)->check(CLI::PositiveNumber);
    c->add_option("--samples", opt.samples)->check(CLI::PositiveNumber);
    add_seed(c);
    add_threads(c);
    add_out(c);
  };
  auto* c_product_sample =
      c_product->add_subcommand("sample", "draw signed products");
  add_product_opts(c_product_sample);
  add_format(c_product_sample);
  auto* c_product_compare = c_product->add_subcommand(
      "compare", "two-sample grid distance: product vs surrogate");
  add_product_opts(c_product_compare);
  c_product_compare->add_option("--grid", grid, "grid points")
      ->check(CLI::Range(2, 1 << 20));
  add_format(c_product_compare);

  // dgp sample|compare
  std::string spec_path;
  std::string x_grid_text;
  double x_value = 1.0;
  bool x_given = false;
  auto* c_dgp = app.add_subcommand("dgp", "polynomial-kernel deep GP prior");
  c_dgp->require_subcommand(1);
  auto add_dgp_opts = [&](CLI::App* c, bool with_grid) {
    c->add_option("--spec", spec_path, "DGP spec JSON file")->required();
    auto* xopt = c->add_option_function<double>(
        "--x",
        [&](double v) {
          x_value = v;
          x_given = true;
        },
        "evaluation input");
    if (with_grid) {
      auto* gopt = c->add_option("--x-grid", x_grid_text, "A:B:STEP");
      xopt->excludes(gopt);
    }
    c->add_option("--samples", opt.samples)->check(CLI::PositiveNumber);
    add_seed(c);
    add_threads(c);
    add_out(c);
  };
  auto* c_dgp_sample = c_dgp->add_subcommand(
      "sample", "draw DGP values at --x, or paths over --x-grid");
  add_dgp_opts(c_dgp_sample, true);
  add_format(c_dgp_sample);
  auto* c_dgp_compare = c_dgp->add_subcommand(
      "compare", "two-sample grid distance: DGP vs surrogate, per x");
  add_dgp_opts(c_dgp_compare, true);
  c_dgp_compare->add_option("--grid", grid, "grid points")
      ->check(CLI::Range(2, 1 << 20));
  add_format(c_dgp_compare);

  // surrogate params|median
  auto* c_surrogate = app.add_subcommand(
      "surrogate", "log-normal surrogate of a DGP spec");
  c_surrogate->require_subcommand(1);
  auto* c_sur_params = c_surrogate->add_subcommand("params",
                                                   "surrogate law parameters");
  c_sur_params->add_option("--spec", spec_path)->required();
  add_format(c_sur_params);
  add_out(c_sur_params);
  auto* c_sur_median = c_surrogate->add_subcommand("median",
                                                   "median of e^Y");
  c_sur_median->add_option("--spec", spec_path)->required();
  add_format(c_sur_median);
  add_out(c_sur_median);

  // d2-report
  std::string policy_text = "multiplicative";
  auto* c_d2 = app.add_subcommand(
      "d2-report", "all-degrees-2 coefficient sums vs quoted closed forms");
  c_d2->add_option("--layers", layers)->required()->check(CLI::Range(3, 1 << 20));
  c_d2->add_option("--sigma", sigma)->required()->check(CLI::PositiveNumber);
  c_d2->add_option("--policy", policy_text)
      ->check(CLI::IsMember({"multiplicative", "paper_additive"}));
  add_format(c_d2);
  add_out(c_d2);

  // threshold
  auto* c_threshold = app.add_subcommand(
      "threshold", "collapse/divergence threshold exp((gamma + log 2)/2)");
  add_format(c_threshold);
  add_out(c_threshold);

  // figure
  std::string figure_id;
  std::string out_dir;
  auto* c_figure = app.add_subcommand("figure", "figure data (CSV + JSON)");
  c_figure->add_option("--id", figure_id, "1a 1b 2a 2b 3a 3b 4a 4b")
      ->required()
      ->check(CLI::IsMember({"1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b"}));
  c_figure->add_option("--out", out_dir, "output directory")->required();
  c_figure->add_option("--samples", opt.samples)->check(CLI::PositiveNumber);
  add_seed(c_figure);
  add_threads(c_figure);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return detail::exit_ok;
  } catch (const CLI::CallForVersion& e) {
    std::cout << app.version() << "\n";
    return detail::exit_ok;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return detail::exit_usage;
  }

  try {
    if (*c_moments) {
      logmoments::LogAbsMoments m = logmoments::moments(sigma);
      if (method == "quadrature") {
        m.abs_third = logmoments::detail::rho_quadrature(sigma);
        m.abs_third_exact = false;
      }
      nlohmann::ordered_json j;
      j["sigma"] = m.sigma;
      j["mean"] = m.mean;
      j["second"] = m.second;
      j["variance"] = m.variance;
      j["abs_third"] = m.abs_third;
      j["abs_third_exact"] = m.abs_third_exact;
      j["fourth"] = m.fourth;
      j["holder_bound"] = logmoments::holder_bound(sigma);
      j["method"] = method;
      detail::emit_report(j, opt);
      return detail::exit_ok;
    }

    if (*c_bebound) {
      const products::ProductConfig cfg{layers, sigma, alpha};
      const auto rho = logmoments::abs_third_moment(sigma);
      nlohmann::ordered_json j;
      j["layers"] = layers;
      j["sigma"] = sigma;
      j["alpha"] = alpha;
      j["rho"] = rho.value;
      j["rho_exact"] = rho.exact;
      j["sigma_log_cubed"] = std::pow(logmoments::log_abs_variance, 1.5);
      j["value"] = products::be_bound_iid(cfg);
      detail::emit_report(j, opt);
      return detail::exit_ok;
    }

    if (*c_product_sample) {
      const products::ProductConfig cfg{layers, sigma, alpha};
      const auto v =
          products::sample_products(cfg, opt.samples, opt.seed, opt.threads);
      detail::emit_table(detail::samples_table(v), opt);
      return detail::exit_ok;
    }

    if (*c_product_compare) {
      const products::ProductConfig cfg{layers, sigma, alpha};
      const auto a =
          products::sample_products(cfg, opt.samples, opt.seed, opt.threads);
      const auto b = products::sample_product_surrogates(cfg, opt.samples,
                                                         opt.seed, opt.threads);
      const auto ks =
          montecarlo::ks_two_sample(a, b, grid, products::be_bound_iid(cfg));
      nlohmann::ordered_json j;
      j["layers"] = layers;
      j["sigma"] = sigma;
      j["alpha"] = alpha;
      j["seed"] = opt.seed;
      auto rep = detail::ks_to_json(ks);
      j.update(rep);
      detail::emit_report(j, opt);
      return ks.pass ? detail::exit_ok : detail::exit_verification;
    }

    if (*c_dgp_sample) {
      const dgp::DgpSpec spec = detail::load_spec_file(spec_path);
      if (!x_grid_text.empty()) {
        const auto xs = detail::parse_x_grid(x_grid_text);
        const std::uint64_t n_paths =
            c_dgp_sample->count("--samples") ? opt.samples : 5;
        rng::Stream rs(opt.seed, rng::streams::dgp_path, 0);
        figures::FigureData t;
        t.columns.push_back({"x", xs});
        for (std::uint64_t p = 0; p < n_paths; ++p) {
          const auto path = dgp::sample_path(spec, rs);
          std::vector<double> sign(xs.size()), logmag(xs.size());
          for (std::size_t i = 0; i < xs.size(); ++i) {
            const SignedLog v = dgp::eval_path_product(spec, path, xs[i]);
            sign[i] = v.sign;
            logmag[i] = v.log_mag;
          }
          const std::string base = "path" + std::to_string(p + 1);
          t.columns.push_back({base + "_sign", std::move(sign)});
          t.columns.push_back({base + "_logmag", std::move(logmag)});
        }
        detail::emit_table(t, opt);
        return detail::exit_ok;
      }
      if (!x_given)
        throw std::invalid_argument("dgp sample: provide --x or --x-grid");
      const auto v = dgp::sample_values(spec, x_value, opt.samples, opt.seed,
                                        opt.threads);
      detail::emit_table(detail::samples_table(v), opt);
      return detail::exit_ok;
    }

    if (*c_dgp_compare) {
      const dgp::DgpSpec spec = detail::load_spec_file(spec_path);
      std::vector<double> xs;
      if (!x_grid_text.empty())
        xs = detail::parse_x_grid(x_grid_text);
      else if (x_given)
        xs.push_back(x_value);
      else
        throw std::invalid_argument("dgp compare: provide --x or --x-grid");
      const double bound = surrogate::be_bound_noniid(spec).value;
      nlohmann::ordered_json reports = nlohmann::ordered_json::array();
      bool all_pass = true;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto a =
            dgp::sample_values(spec, xs[i], opt.samples, opt.seed, opt.threads,
                               rng::streams::dgp_path + 2 * i);
        const auto b = surrogate::sample_surrogates(
            spec, xs[i], opt.samples, opt.seed, opt.threads,
            rng::streams::dgp_surrogate + 2 * i);
        const auto ks = montecarlo::ks_two_sample(a, b, grid, bound);
        auto j = detail::ks_to_json(ks);
        j["x"] = xs[i];
        reports.push_back(std::move(j));
        all_pass = all_pass && ks.pass;
      }
      nlohmann::ordered_json j;
      j["bound"] = bound;
      j["seed"] = opt.seed;
      j["reports"] = std::move(reports);
      const std::string fmt = opt.format.empty() ? "json" : opt.format;
      if (fmt == "json") {
        detail::write_text(opt.out, j.dump(2) + "\n");
      } else {
        figures::FigureData t;
        std::vector<double> xcol, dcol, bcol, scol, pcol;
        for (const auto& r : j["reports"]) {
          xcol.push_back(r["x"].get<double>());
          dcol.push_back(r["distance"].get<double>());
          bcol.push_back(r["bound"].get<double>());
          scol.push_back(r["slack"].get<double>());
          pcol.push_back(r["verdict"] == "pass" ? 1.0 : 0.0);
        }
        t.columns = {{"x", xcol},
                     {"distance", dcol},
                     {"bound", bcol},
                     {"slack", scol},
                     {"pass", pcol}};
        detail::write_text(opt.out, figures::to_csv(t));
      }
      return all_pass ? detail::exit_ok : detail::exit_verification;
    }

    if (*c_sur_params) {
      const dgp::DgpSpec spec = detail::load_spec_file(spec_path);
      const auto law = surrogate::surrogate_params(spec);
      const auto bound = surrogate::be_bound_noniid(spec);
      nlohmann::ordered_json j;
      j["mu_y"] = law.mu_y;
      j["var_y"] = law.var_y;
      j["c1"] = law.c1;
      j["exponents"] = law.exponents;
      j["first"] = {{"c", law.first.c},
                    {"degree", law.first.degree},
                    {"scale", law.first.scale}};
      j["be_bound"] = bound.value;
      j["be_sum_var"] = bound.sum_var;
      j["be_sum_rho"] = bound.sum_rho;
      j["rho_fallback"] = bound.rho_fallback;
      detail::emit_report(j, opt);
      return detail::exit_ok;
    }

    if (*c_sur_median) {
      const dgp::DgpSpec spec = detail::load_spec_file(spec_path);
      nlohmann::ordered_json j;
      j["median"] = surrogate::median_dgp_surrogate(spec);
      j["mu_y"] = surrogate::surrogate_params(spec).mu_y;
      detail::emit_report(j, opt);
      return detail::exit_ok;
    }

    if (*c_d2) {
      const auto r = surrogate::d2_report(
          layers, sigma, dgp::policy_from_string(policy_text));
      detail::emit_report(surrogate::to_json(r), opt);
      return detail::exit_ok;
    }

    if (*c_threshold) {
      nlohmann::ordered_json j;
      j["threshold_sigma"] = surrogate::threshold_sigma();
      detail::emit_report(j, opt);
      return detail::exit_ok;
    }

    if (*c_figure) {
      figures::FigureOptions fopt;
      fopt.samples = opt.samples;
      fopt.seed = opt.seed;
      fopt.threads = opt.threads;
      const auto data = figures::figure_data(figure_id, fopt);
      const std::string base = out_dir + "/figure_" + figure_id;
      detail::write_text(base + ".csv", figures::to_csv(data));
      detail::write_text(base + ".json", figures::to_json(data).dump(2) + "\n");
      return detail::exit_ok;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return detail::exit_domain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return detail::exit_domain;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return detail::exit_domain;
  }
  return detail::exit_usage;
}

}  // namespace dgplab::cli
