#pragma once

// Counter-based random numbers (Philox4x32-10) so that Monte Carlo work can
// be partitioned into chunks with independent, reproducible substreams: the
// draw sequence is a pure function of (seed, stream, chunk). Worker count
// never changes results.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

namespace dgplab::rng {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct PhiloxBlock {
  std::uint32_t v[4]{};
};

inline PhiloxBlock philox4x32_10(std::uint32_t k0, std::uint32_t k1,
                                 std::uint64_t ctr_hi, std::uint64_t ctr_lo) {
  std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
  std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
  std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
  constexpr std::uint32_t M0 = 0xD2511F53u;
  constexpr std::uint32_t M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u;
  constexpr std::uint32_t W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c2;
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += W0;
    k1 += W1;
  }
  return {{c0, c1, c2, c3}};
}

}  // namespace detail

// One substream: addressed by (seed, stream, chunk), consumed sequentially.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk = 0)
      : key_(detail::splitmix64(seed ^ detail::splitmix64(stream * 2 + 1))),
        ctr_hi_(chunk) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return block_.v[pos_++ & 3];
  }

  std::uint64_t next_u64() {
    const std::uint64_t a = next_u32();
    const std::uint64_t b = next_u32();
    return (a << 32) | b;
  }

  // Uniform on (0, 1]; never returns 0, so log() is always finite.
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; pairs are cached.
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  int fair_sign() { return (next_u32() & 1u) ? 1 : -1; }

 private:
  void refill() {
    block_ = detail::philox4x32_10(static_cast<std::uint32_t>(key_),
                                   static_cast<std::uint32_t>(key_ >> 32),
                                   ctr_hi_, ctr_lo_++);
    pos_ = 0;
  }

  std::uint64_t key_ = 0;
  std::uint64_t ctr_hi_ = 0;
  std::uint64_t ctr_lo_ = 0;
  detail::PhiloxBlock block_{};
  int pos_ = 4;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

inline constexpr std::uint64_t default_chunk_items = 1 << 14;

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(hw == 0 ? 1 : (hw > 8 ? 8 : hw));
}

// Runs fn(chunk_index, first_item, last_item) over [0, n) split into fixed
// chunks. fn must only touch state owned by its item range (or a per-chunk
// slot); then any worker count yields identical results.
template <class Fn>
void for_each_chunk(std::uint64_t n, int threads, Fn&& fn,
                    std::uint64_t chunk_items = default_chunk_items) {
  if (n == 0) return;
  const std::uint64_t n_chunks = (n + chunk_items - 1) / chunk_items;
  threads = resolve_threads(threads);
  if (threads <= 1 || n_chunks == 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
      const std::uint64_t lo = c * chunk_items;
      const std::uint64_t hi = std::min(n, lo + chunk_items);
      fn(c, lo, hi);
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      const std::uint64_t lo = c * chunk_items;
      const std::uint64_t hi = std::min(n, lo + chunk_items);
      fn(c, lo, hi);
    }
  };
  std::vector<std::thread> pool;
  const int nw = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), n_chunks));
  pool.reserve(nw);
  for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// Stream ids; every independent consumer of randomness gets its own lane.
namespace streams {
inline constexpr std::uint64_t product = 1;
inline constexpr std::uint64_t product_surrogate = 2;
inline constexpr std::uint64_t dgp_path = 3;
inline constexpr std::uint64_t dgp_surrogate = 4;
inline constexpr std::uint64_t figure_base = 1000;
}  // namespace streams

}  // namespace dgplab::rng
