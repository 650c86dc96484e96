#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dgplab/rng.hpp"
#include "dgplab/signedlog.hpp"

using namespace dgplab;

TEST_CASE("signedlog round trip across the full double range") {
  for (double lm = -300.0; lm <= 300.0; lm += 12.5) {
    for (int s : {-1, 1}) {
      const SignedLog a{s, lm};
      const SignedLog b = SignedLog::from_real(a.to_real());
      CHECK(b.sign == s);
      CHECK(std::fabs(b.log_mag - lm) <= 1e-12 * std::fmax(1.0, std::fabs(lm)));
    }
  }
  // real-value round trip loses |log| * eps of relative precision
  for (double v : {1.0, -2.5, 1e-300, -1e300, 0.125}) {
    CHECK(SignedLog::from_real(v).to_real() == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("signedlog zero handling") {
  const SignedLog z = SignedLog::from_real(0.0);
  CHECK(z.is_zero());
  CHECK(z.to_real() == 0.0);
  CHECK(z.sign == 1);
  CHECK((z * SignedLog::from_real(3.0)).is_zero());
  CHECK((SignedLog::from_real(-0.0)).is_zero());
  CHECK(signedlog_eq(z, SignedLog::zero()));
  // zero to the zeroth power is one by convention
  CHECK(z.pow_int(0).to_real() == 1.0);
  CHECK(z.pow_int(3).is_zero());
}

TEST_CASE("signedlog multiplication adds log magnitudes") {
  const SignedLog a{-1, 10.0};
  const SignedLog b{-1, 250.0};
  const SignedLog c = a * b;
  CHECK(c.sign == 1);
  CHECK(c.log_mag == 260.0);

  // ten thousand factors without overflow
  SignedLog p{1, 0.0};
  for (int i = 0; i < 10000; ++i) p *= SignedLog{i % 2 ? -1 : 1, 100.0};
  CHECK(p.log_mag == doctest::Approx(1e6).epsilon(1e-12));
  CHECK(p.sign == 1);

  CHECK(SignedLog{-1, 1.0}.pow_int(3).sign == -1);
  CHECK(SignedLog{-1, 1.0}.pow_int(4).sign == 1);
  CHECK(SignedLog{-1, 2.0}.pow_int(5).log_mag == 10.0);
}

TEST_CASE("signedlog ordering matches real ordering") {
  std::vector<double> vals{-5.0, -1.0, -1e-12, 0.0, 1e-300, 0.5, 3.0, 2e10};
  std::vector<SignedLog> sl;
  for (double v : vals) sl.push_back(SignedLog::from_real(v));
  std::vector<SignedLog> shuffled{sl[5], sl[0], sl[7], sl[3],
                                  sl[1], sl[6], sl[2], sl[4]};
  std::sort(shuffled.begin(), shuffled.end(), signedlog_less);
  for (std::size_t i = 0; i < sl.size(); ++i)
    CHECK(signedlog_eq(shuffled[i], sl[i]));
  CHECK(signedlog_less(SignedLog{-1, 500.0}, SignedLog{-1, 2.0}));
  CHECK(signedlog_less(SignedLog{-1, 2.0}, SignedLog::zero()));
  CHECK(signedlog_less(SignedLog::zero(), SignedLog{1, -600.0}));
}

TEST_CASE("streams are deterministic and distinct") {
  rng::Stream a(42, 7, 0);
  rng::Stream b(42, 7, 0);
  rng::Stream c(42, 8, 0);
  rng::Stream d(43, 7, 0);
  bool any_c_diff = false, any_d_diff = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint32_t va = a.next_u32();
    CHECK(va == b.next_u32());
    any_c_diff |= va != c.next_u32();
    any_d_diff |= va != d.next_u32();
  }
  CHECK(any_c_diff);
  CHECK(any_d_diff);
}

TEST_CASE("uniforms live in (0, 1]") {
  rng::Stream s(1, 2, 3);
  for (int i = 0; i < 20000; ++i) {
    const double u = s.next_uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("normal moments") {
  rng::Stream s(2024, 1, 0);
  const int n = 1'000'000;
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.next_normal();
    sum += z;
    sum2 += z * z;
    sum3 += z * z * z;
    sum4 += z * z * z * z;
  }
  const double rn = std::sqrt(double(n));
  CHECK(std::fabs(sum / n) < 4.0 / rn);
  CHECK(std::fabs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0) / rn);
  CHECK(std::fabs(sum3 / n) < 4.0 * std::sqrt(15.0) / rn);
  CHECK(std::fabs(sum4 / n - 3.0) < 4.0 * std::sqrt(96.0) / rn);
}

TEST_CASE("fair signs are balanced") {
  rng::Stream s(5, 5, 5);
  int pos = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i)
    if (s.fair_sign() > 0) ++pos;
  CHECK(std::fabs(pos / double(n) - 0.5) < 4.0 * 0.5 / std::sqrt(double(n)));
}

TEST_CASE("chunked execution is worker-count invariant") {
  const std::uint64_t n = 100000;
  auto sample = [&](int threads) {
    std::vector<double> out(n);
    rng::for_each_chunk(n, threads,
                        [&](std::uint64_t chunk, std::uint64_t lo,
                            std::uint64_t hi) {
                          rng::Stream rs(11, 22, chunk);
                          for (std::uint64_t i = lo; i < hi; ++i)
                            out[i] = rs.next_normal();
                        });
    return out;
  };
  const auto a = sample(1);
  const auto b = sample(4);
  const auto c = sample(3);
  CHECK(a == b);
  CHECK(a == c);
}
