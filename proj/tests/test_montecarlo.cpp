#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dgplab/figures.hpp"
#include "dgplab/io.hpp"
#include "dgplab/montecarlo.hpp"
#include "dgplab/products.hpp"

using namespace dgplab;
namespace mc = dgplab::montecarlo;

namespace {
std::vector<SignedLog> normal_logmags(double mu, std::uint64_t n,
                                      std::uint64_t seed,
                                      std::uint64_t stream) {
  std::vector<SignedLog> out(n);
  rng::Stream rs(seed, stream, 0);
  for (auto& s : out) s = SignedLog{1, mu + rs.next_normal()};
  return out;
}
}  // namespace

TEST_CASE("empirical cdf basics") {
  std::vector<SignedLog> xs;
  for (double v : {3.0, -1.0, 0.0, 2.0, -7.0})
    xs.push_back(SignedLog::from_real(v));
  const mc::EmpiricalCdf f(xs);
  CHECK(f(SignedLog::from_real(-100.0)) == 0.0);
  CHECK(f(SignedLog::from_real(100.0)) == 1.0);
  CHECK(f(SignedLog::from_real(0.0)) == doctest::Approx(0.6));
  CHECK(f(SignedLog::from_real(-1.0)) == doctest::Approx(0.4));
  // monotone along a sweep
  double prev = -1.0;
  for (double t = -8.0; t <= 4.0; t += 0.25) {
    const double v = f(SignedLog::from_real(t));
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("two-sample distance: identical and iid samples") {
  const auto a = normal_logmags(0.0, 20000, 1, 500);
  const auto same = mc::ks_two_sample(a, a, 512, 0.0);
  CHECK(same.distance == 0.0);
  CHECK(same.pass);

  const auto b = normal_logmags(0.0, 20000, 1, 501);
  const auto r = mc::ks_two_sample(a, b, 512, 0.0);
  CHECK(r.distance <= r.slack);
  CHECK(r.pass);
  CHECK(r.n_a == 20000);
  CHECK(r.grid_points == 512);

  // symmetry in the two samples
  const auto rba = mc::ks_two_sample(b, a, 512, 0.0);
  CHECK(rba.distance == r.distance);
}

TEST_CASE("two-sample distance flags genuinely different laws") {
  const auto a = normal_logmags(0.0, 20000, 2, 502);
  const auto b = normal_logmags(3.0, 20000, 2, 503);
  const auto r = mc::ks_two_sample(a, b, 512, 0.0);
  CHECK(r.distance > 0.5);
  CHECK_FALSE(r.pass);
}

TEST_CASE("grid distance is invariant under monotone transforms") {
  const auto a = normal_logmags(0.2, 5000, 3, 504);
  const auto b = normal_logmags(0.0, 5000, 3, 505);
  const double d0 = mc::ks_two_sample(a, b, 256, 0.0).distance;
  auto transform = [](std::vector<SignedLog> v) {
    for (auto& s : v) s.log_mag = std::exp(s.log_mag);  // strictly increasing
    return v;
  };
  const double d1 = mc::ks_two_sample(transform(a), transform(b), 256, 0.0)
                        .distance;
  CHECK(d0 == d1);
}

TEST_CASE("input validation") {
  const auto small = normal_logmags(0.0, 10, 4, 506);
  const auto ok = normal_logmags(0.0, 2000, 4, 507);
  CHECK_THROWS_AS((void)mc::ks_two_sample(small, ok, 512, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS((void)mc::ks_two_sample(ok, ok, 1, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)mc::prob_from_count(1, 10), std::domain_error);
}

TEST_CASE("probability estimates") {
  const auto always = mc::prob_from_count(5000, 5000);
  CHECK(always.p_hat == 1.0);
  CHECK(always.se == 0.0);

  // P(|X| <= 1/2) for X ~ N(0, 9) is 2 Phi(1/6) - 1
  const auto v = products::sample_products({1, 3.0, 1}, 100000, 6);
  const auto est = mc::prob_estimate(v, [](const SignedLog& s) {
    return s.log_mag <= std::log(0.5);
  });
  const double target = 2.0 * specfun::normal_cdf(1.0 / 6.0) - 1.0;
  CHECK(std::fabs(est.p_hat - target) <= 3.0 * est.se);

  // consistency across nested sample sizes
  double prev_err = 1.0;
  for (std::uint64_t n : {std::uint64_t(10000), std::uint64_t(100000),
                          std::uint64_t(1000000)}) {
    const auto vv = products::sample_products({1, 3.0, 1}, n, 6);
    const auto e = mc::prob_estimate(vv, [](const SignedLog& s) {
      return s.log_mag <= std::log(0.5);
    });
    CHECK(std::fabs(e.p_hat - target) <= 3.0 * e.se + 1e-12);
    prev_err = e.se;
  }
  CHECK(prev_err < 0.002);
}

TEST_CASE("figure data determinism") {
  figures::FigureOptions opt;
  opt.samples = 20000;
  opt.seed = 7;
  const auto a = figures::figure_data("1b", opt);
  const auto b = figures::figure_data("1b", opt);
  CHECK(figures::to_csv(a) == figures::to_csv(b));
  CHECK(figures::to_json(a).dump() == figures::to_json(b).dump());
  opt.seed = 8;
  const auto c = figures::figure_data("1b", opt);
  CHECK(figures::to_csv(a) != figures::to_csv(c));

  // worker count does not change bytes
  opt.seed = 7;
  opt.threads = 3;
  const auto d = figures::figure_data("1b", opt);
  CHECK(figures::to_csv(a) == figures::to_csv(d));
}

TEST_CASE("figure 1b series head matches the exact single-factor value") {
  figures::FigureOptions opt;
  opt.samples = 100000;
  opt.seed = 12;
  const auto f = figures::figure_data("1b", opt);
  // columns: ell, then (p, se) per sigma in {2, 2.5, 3}
  REQUIRE(f.columns.size() == 7);
  CHECK(f.columns[0].name == "ell");
  const double p1 = f.columns[1].values[0];   // sigma = 2, depth 1
  const double se1 = f.columns[2].values[0];
  const double target = 2.0 * specfun::normal_cdf(0.25) - 1.0;
  CHECK(std::fabs(p1 - target) <= 3.0 * se1);
}

TEST_CASE("figure 2a stays inside its own error band") {
  figures::FigureOptions opt;
  opt.samples = 100000;
  opt.seed = 5;
  const auto f = figures::figure_data("2a", opt);
  const auto& p = f.columns[1].values;
  const auto& pl = f.columns[3].values;
  const auto& bound = f.columns[4].values;
  for (std::size_t i = 0; i < p.size(); ++i)
    CHECK(std::fabs(p[i] - pl[i]) <= bound[i]);
}

TEST_CASE("figure 4a path structure") {
  figures::FigureOptions opt;
  opt.seed = 0;
  const auto f = figures::figure_data("4a", opt);
  REQUIRE(f.columns.size() == 16);  // x + 5 * (sign, logmag, value)
  REQUIRE(f.columns[0].values.size() == 401);
  CHECK(f.columns[0].values.front() == doctest::Approx(-2.0));
  CHECK(f.columns[0].values.back() == doctest::Approx(2.0));
  // linear kernel with c = 0: every path passes through the origin
  const std::size_t origin = 200;
  CHECK(f.columns[0].values[origin] == doctest::Approx(0.0));
  for (int path = 0; path < 5; ++path) {
    const auto& logmag = f.columns[2 + 3 * path].values;
    const auto& value = f.columns[3 + 3 * path].values;
    CHECK(std::isinf(logmag[origin]));
    CHECK(logmag[origin] < 0.0);
    CHECK(value[origin] == 0.0);
    // value column is consistent with the signed-log pair away from zero
    const auto& sign = f.columns[1 + 3 * path].values;
    for (std::size_t i : {std::size_t(0), std::size_t(100), std::size_t(300)}) {
      CHECK(value[i] ==
            doctest::Approx(sign[i] * std::exp(logmag[i])).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS((void)figures::figure_data("9z", opt), std::domain_error);
}

TEST_CASE("histogram figures") {
  figures::FigureOptions opt;
  opt.samples = 50000;
  opt.seed = 9;
  const auto f = figures::figure_data("1a", opt);
  REQUIRE(f.columns.size() == 4);
  CHECK(f.columns[0].name == "bin_center");
  for (const auto& c : f.columns) CHECK(c.values.size() == 200);

  // clip range is symmetric and densities integrate to the kept fraction
  const double lo = f.meta.at("params").at("clip_lo").get<double>();
  const double hi = f.meta.at("params").at("clip_hi").get<double>();
  CHECK(lo == -hi);
  const double w = (hi - lo) / 200.0;
  const auto dropped =
      f.meta.at("params").at("dropped").get<std::vector<std::uint64_t>>();
  for (int s = 0; s < 3; ++s) {
    double mass = 0.0;
    for (double d : f.columns[1 + s].values) mass += d * w;
    const double kept = 1.0 - dropped[s] / double(opt.samples);
    CHECK(mass == doctest::Approx(kept).epsilon(1e-9));
  }
  // the depth-1 series is standard normal: density near 0 is ~ 0.4
  const double mid = f.columns[1].values[100];
  CHECK(mid == doctest::Approx(0.3989).epsilon(0.1));
}

TEST_CASE("every figure id generates consistent columns") {
  figures::FigureOptions opt;
  opt.samples = 20000;
  opt.seed = 2;
  for (const std::string id : {"1a", "1b", "2a", "2b", "3a", "3b", "4a",
                               "4b"}) {
    const auto f = figures::figure_data(id, opt);
    REQUIRE(!f.columns.empty());
    const auto rows = f.columns[0].values.size();
    CHECK(rows > 0);
    for (const auto& c : f.columns) CHECK(c.values.size() == rows);
    CHECK(f.meta.contains("seed"));
    CHECK(f.meta.contains("n"));
    CHECK(f.meta.contains("params"));
    CHECK(f.meta.contains("git_describe"));
    CHECK(f.figure_id == id);
  }
}

TEST_CASE("figure 3b tracks its surrogate curve") {
  figures::FigureOptions opt;
  opt.samples = 50000;
  opt.seed = 4;
  const auto f = figures::figure_data("3b", opt);
  const auto& p = f.columns[1].values;
  const auto& ps = f.columns[3].values;
  // the surrogate prediction is within the iid bound of the empirical curve
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double bound =
        products::be_bound_iid({static_cast<int>(i) + 1, 3.0, 1});
    CHECK(std::fabs(p[i] - ps[i]) <= bound + 0.01);
  }
}

TEST_CASE("number formatting for series output") {
  CHECK(io::format_number(0.0) == "0");
  CHECK(io::format_number(0.5) == "0.5");
  CHECK(io::format_number(-1.0) == "-1");
  CHECK(io::format_number(123456.0) == "123456");
  CHECK(io::format_number(2e6) == "2.0000000000e+06");
  CHECK(io::format_number(5e-5) == "5.0000000000e-05");
  CHECK(io::format_number(1e-4) == "0.0001");
  CHECK(io::format_number(-std::numeric_limits<double>::infinity()) ==
        "-inf");

  figures::FigureData t;
  t.columns.push_back({"a", {1.0, 2.5}});
  t.columns.push_back({"b", {-1e-7, 4.0}});
  CHECK(figures::to_csv(t) == "a,b\n1,-1.0000000000e-07\n2.5,4\n");
}
