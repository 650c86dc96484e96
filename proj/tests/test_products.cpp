#include <doctest.h>

#include <cmath>
#include <vector>

#include "dgplab/montecarlo.hpp"
#include "dgplab/products.hpp"

using namespace dgplab;
namespace pr = dgplab::products;
namespace lm = dgplab::logmoments;

TEST_CASE("single factor reproduces the Gaussian law") {
  const pr::ProductConfig cfg{1, 2.0, 1};
  rng::Stream rs(1, 100, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  int neg = 0;
  for (int i = 0; i < n; ++i) {
    const double v = pr::sample_product(cfg, rs).to_real();
    sum += v;
    sum2 += v * v;
    if (v < 0) ++neg;
  }
  const double rn = std::sqrt(double(n));
  CHECK(std::fabs(sum / n) < 4.0 * 2.0 / rn);
  CHECK(std::fabs(sum2 / n - 4.0) < 4.0 * 4.0 * std::sqrt(2.0) / rn);
  CHECK(std::fabs(neg / double(n) - 0.5) < 4.0 * 0.5 / rn);
}

TEST_CASE("even powers force a positive sign") {
  const pr::ProductConfig cfg{3, 1.0, 2};
  rng::Stream rs(2, 100, 0);
  for (int i = 0; i < 20000; ++i)
    CHECK(pr::sample_product(cfg, rs).sign == 1);
}

TEST_CASE("log magnitude of a depth-10 product concentrates correctly") {
  const pr::ProductConfig cfg{10, 1.0, 1};
  const std::uint64_t n = 1'000'000;
  const auto v = pr::sample_products(cfg, n, /*seed=*/7);
  double sum = 0.0;
  for (const auto& s : v) sum += s.log_mag;
  const double mean = sum / double(n);
  const double target = 10.0 * lm::mean_log_abs(1.0);
  const double tol =
      3.0 * std::sqrt(10.0 * lm::log_abs_variance) / std::sqrt(double(n));
  CHECK(std::fabs(mean - target) < tol);
}

TEST_CASE("surrogate law parameters") {
  const auto law = pr::surrogate_product_law({10, 1.0, 1});
  CHECK(law.mu == doctest::Approx(-6.351814227307391).epsilon(1e-12));
  CHECK(law.var == doctest::Approx(10.0 * M_PI * M_PI / 8.0).epsilon(1e-15));

  // alpha multiplies depth in the mean: (l, sigma, 5) vs (5l, sigma, 1)
  CHECK(pr::surrogate_product_law({10, 2.0, 5}).mu ==
        doctest::Approx(pr::surrogate_product_law({50, 2.0, 1}).mu)
            .epsilon(1e-14));
  // power one is the plain product law
  CHECK(pr::surrogate_product_law({7, 1.5, 1}).var ==
        doctest::Approx(7.0 * lm::log_abs_variance).epsilon(1e-15));
}

TEST_CASE("iid bound: alpha cancels, sqrt(l) scales") {
  const double b1 = pr::be_bound_iid({10, 1.0, 1});
  CHECK(b1 == pr::be_bound_iid({10, 1.0, 7}));
  CHECK(pr::be_bound_iid({40, 1.0, 1}) == doctest::Approx(b1 / 2.0).epsilon(1e-15));

  const double s3 = std::pow(lm::log_abs_variance, 1.5);
  const double rho = lm::abs_third_moment(1.0).value;
  CHECK(b1 == doctest::Approx(0.336 * (rho + 0.415 * s3) /
                              (s3 * std::sqrt(10.0)))
                  .epsilon(1e-14));
  // depends on sigma only through rho
  const double b3 = pr::be_bound_iid({10, 3.0, 1});
  const double rho3 = lm::abs_third_moment(3.0).value;
  CHECK(b3 == doctest::Approx(0.336 * (rho3 + 0.415 * s3) /
                              (s3 * std::sqrt(10.0)))
                  .epsilon(1e-14));
}

TEST_CASE("surrogate cdf") {
  const pr::GaussianLaw law{-2.0, 4.0};
  CHECK(pr::surrogate_cdf(law, true, 0.0) == 0.5);
  CHECK(pr::surrogate_cdf(law, false, std::exp(law.mu)) == 0.5);
  CHECK(pr::surrogate_cdf(law, false, 0.0) == 0.0);
  CHECK(pr::surrogate_cdf(law, false, -3.0) == 0.0);
  CHECK(pr::surrogate_cdf(law, false, 1e300) == doctest::Approx(1.0));
  CHECK(pr::surrogate_cdf(law, true, 1e300) == doctest::Approx(1.0));

  // signed symmetry is exact by construction
  for (double t : {1e-8, 0.02, 1.0, 55.0, 1e9}) {
    CHECK(pr::surrogate_cdf(law, true, -t) ==
          1.0 - pr::surrogate_cdf(law, true, t));
  }
  CHECK_THROWS_AS((void)pr::surrogate_cdf({0.0, 0.0}, false, 1.0),
                  std::domain_error);
}

TEST_CASE("median of the surrogate") {
  const double sigma_star =
      std::exp(0.5 * (specfun::constants.euler_gamma + M_LN2));
  for (int l : {1, 5, 30})
    CHECK(pr::median_surrogate({l, sigma_star, 2}) ==
          doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pr::median_surrogate({10, 1.0, 1}) ==
        doctest::Approx(1.744e-3).epsilon(1e-3));
  CHECK(pr::median_surrogate({30, 3.0, 1}) ==
        doctest::Approx(std::exp(30.0 * (std::log(3.0) -
                                         0.6351814227307391)))
            .epsilon(1e-12));
}

TEST_CASE("config validation") {
  rng::Stream rs(0, 0, 0);
  CHECK_THROWS_AS((void)pr::sample_product({0, 1.0, 1}, rs), std::domain_error);
  CHECK_THROWS_AS((void)pr::sample_product({1, 0.0, 1}, rs), std::domain_error);
  CHECK_THROWS_AS((void)pr::sample_product({1, 1.0, 0}, rs), std::domain_error);
  CHECK_THROWS_AS((void)pr::be_bound_iid({-3, 1.0, 1}), std::domain_error);
}

TEST_CASE("sign and magnitude of a Gaussian factor are independent") {
  const std::uint64_t n = 1'000'000;
  const auto v = pr::sample_products({1, 1.0, 1}, n, /*seed=*/11);
  for (double b : {0.5, 1.0, 2.0}) {
    const double lb = std::log(b);
    std::uint64_t pos = 0, small = 0, both = 0;
    for (const auto& s : v) {
      const bool p = s.sign > 0;
      const bool q = s.log_mag <= lb;
      pos += p;
      small += q;
      both += p && q;
    }
    const double joint = both / double(n);
    const double product = (pos / double(n)) * (small / double(n));
    CHECK(std::fabs(joint - product) <= 4.0 / std::sqrt(double(n)));
  }
}

TEST_CASE("uniform distance to the analytic surrogate cdf") {
  // one-sample check against the analytic cdf over the whole
  // (layers, sigma, alpha) matrix, at reduced n (the DKW slack widens
  // to match)
  for (int layers : {5, 10, 30}) {
    for (double sigma : {1.0, 3.0}) {
      for (int alpha : {1, 2}) {
        const pr::ProductConfig cfg{layers, sigma, alpha};
        const std::uint64_t n = 200000;
        const auto samples = pr::sample_products(cfg, n, /*seed=*/23);
        const auto law = pr::surrogate_product_law(cfg);
        const bool signed_product = cfg.alpha % 2 != 0;
        const auto report = montecarlo::ks_vs_cdf(
            samples,
            [&](const SignedLog& t) {
              return pr::surrogate_cdf(law, signed_product, t);
            },
            montecarlo::default_grid_points, pr::be_bound_iid(cfg));
        CAPTURE(layers);
        CAPTURE(sigma);
        CAPTURE(alpha);
        CHECK(report.pass);
      }
    }
  }
}

TEST_CASE("surrogate sampler matches its own analytic cdf") {
  const pr::ProductConfig cfg{10, 1.0, 1};
  const std::uint64_t n = 200000;
  const auto samples = pr::sample_product_surrogates(cfg, n, /*seed=*/31);
  const auto law = pr::surrogate_product_law(cfg);
  const auto report = montecarlo::ks_vs_cdf(
      samples,
      [&](const SignedLog& t) {
        return pr::surrogate_cdf(law, true, t);
      },
      montecarlo::default_grid_points, 0.0);
  CHECK(report.pass);  // distance within DKW slack alone

  // even alpha surrogate is nonnegative
  const auto even = pr::sample_product_surrogates({4, 1.0, 2}, 5000, 1);
  for (const auto& s : even) CHECK(s.sign == 1);
}
