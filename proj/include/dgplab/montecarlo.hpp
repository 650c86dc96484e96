#pragma once

// Statistical verification: empirical CDFs over SignedLog keys, grid
// sup-distance with Dvoretzky-Kiefer-Wolfowitz slack, and probability
// estimates with standard errors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dgplab/signedlog.hpp"

namespace dgplab::montecarlo {

inline constexpr double default_dkw_delta = 0.001;
inline constexpr int default_grid_points = 512;
inline constexpr std::uint64_t min_samples = 1000;

class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<SignedLog> samples)
      : sorted_(std::move(samples)) {
    std::sort(sorted_.begin(), sorted_.end(), signedlog_less);
  }

  // Right-continuous: F(t) = #{x_i <= t} / n.
  double operator()(const SignedLog& t) const {
    const auto it =
        std::upper_bound(sorted_.begin(), sorted_.end(), t, signedlog_less);
    return static_cast<double>(it - sorted_.begin()) / sorted_.size();
  }

  std::uint64_t size() const { return sorted_.size(); }
  const std::vector<SignedLog>& sorted() const { return sorted_; }

 private:
  std::vector<SignedLog> sorted_;
};

struct KsReport {
  double distance = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  std::uint64_t n_a = 0;
  std::uint64_t n_b = 0;  // 0 when the reference side is an analytic CDF
  int grid_points = 0;
  bool pass = false;
};

inline double dkw_slack(std::uint64_t n, double delta = default_dkw_delta) {
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

namespace detail {

// Evaluation grid: quantile-spread points of the pooled sorted samples.
// Rank-based, so the sup estimate is invariant under any strictly
// increasing transform applied to both samples.
inline std::vector<SignedLog> pooled_grid(const std::vector<SignedLog>& a,
                                          const std::vector<SignedLog>& b,
                                          int grid) {
  std::vector<SignedLog> pool;
  pool.reserve(a.size() + b.size());
  pool.insert(pool.end(), a.begin(), a.end());
  pool.insert(pool.end(), b.begin(), b.end());
  std::sort(pool.begin(), pool.end(), signedlog_less);
  std::vector<SignedLog> g;
  g.reserve(grid);
  const std::uint64_t n = pool.size();
  for (int i = 0; i < grid; ++i) {
    const std::uint64_t idx =
        static_cast<std::uint64_t>(static_cast<long double>(i) * (n - 1) /
                                   (grid - 1));
    g.push_back(pool[idx]);
  }
  return g;
}

}  // namespace detail

// Grid sup-distance between two empirical CDFs. `bound` is the theoretical
// distance allowance the verdict is checked against; the slack is the sum
// of one-sided DKW terms for the two sample sizes.
inline KsReport ks_two_sample(const std::vector<SignedLog>& a,
                              const std::vector<SignedLog>& b,
                              int grid = default_grid_points,
                              double bound = 0.0,
                              double delta = default_dkw_delta) {
  if (a.size() < min_samples || b.size() < min_samples)
    throw std::domain_error("ks_two_sample: need at least 1000 samples/side");
  if (grid < 2) throw std::domain_error("ks_two_sample: grid >= 2");
  const EmpiricalCdf fa{a};
  const EmpiricalCdf fb{b};
  const auto grid_pts = detail::pooled_grid(a, b, grid);
  double d = 0.0;
  for (const auto& t : grid_pts)
    d = std::fmax(d, std::fabs(fa(t) - fb(t)));
  KsReport r;
  r.distance = d;
  r.bound = bound;
  r.slack = dkw_slack(a.size(), delta) + dkw_slack(b.size(), delta);
  r.n_a = a.size();
  r.n_b = b.size();
  r.grid_points = grid;
  r.pass = r.distance <= r.bound + r.slack;
  return r;
}

// Grid sup-distance between one empirical CDF and an analytic CDF; the
// slack is twice the one-sample DKW term.
inline KsReport ks_vs_cdf(const std::vector<SignedLog>& a,
                          const std::function<double(const SignedLog&)>& cdf,
                          int grid = default_grid_points, double bound = 0.0,
                          double delta = default_dkw_delta) {
  if (a.size() < min_samples)
    throw std::domain_error("ks_vs_cdf: need at least 1000 samples");
  if (grid < 2) throw std::domain_error("ks_vs_cdf: grid >= 2");
  const EmpiricalCdf fa{a};
  const auto& s = fa.sorted();
  double d = 0.0;
  for (int i = 0; i < grid; ++i) {
    const std::uint64_t idx = static_cast<std::uint64_t>(
        static_cast<long double>(i) * (s.size() - 1) / (grid - 1));
    const SignedLog& t = s[idx];
    d = std::fmax(d, std::fabs(fa(t) - cdf(t)));
  }
  KsReport r;
  r.distance = d;
  r.bound = bound;
  r.slack = 2.0 * dkw_slack(a.size(), delta);
  r.n_a = a.size();
  r.n_b = 0;
  r.grid_points = grid;
  r.pass = r.distance <= r.bound + r.slack;
  return r;
}

struct ProbEstimate {
  double p_hat = 0.0;
  double se = 0.0;
};

inline ProbEstimate prob_from_count(std::uint64_t hits, std::uint64_t n) {
  if (n < min_samples)
    throw std::domain_error("prob_estimate: need at least 1000 samples");
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

template <class Pred>
ProbEstimate prob_estimate(const std::vector<SignedLog>& samples,
                           Pred&& event) {
  std::uint64_t hits = 0;
  for (const auto& s : samples)
    if (event(s)) ++hits;
  return prob_from_count(hits, samples.size());
}

}  // namespace dgplab::montecarlo
