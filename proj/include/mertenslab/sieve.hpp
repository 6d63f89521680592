#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"

namespace mertenslab {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kMaxSieveLimit = u64{1} << 40;
inline constexpr u64 kDefaultSegmentSize = u64{1} << 18;
inline constexpr u64 kDefaultMemoryBudget = u64{4} << 30;

/// Floor of the square root, exact for the whole u64 range.
constexpr u64 isqrt(u64 n) noexcept {
  if (n < 2) return n;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct PrimePower {
  u64 prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = product of prime^exponent, primes strictly increasing.
struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

struct SieveOptions {
  u64 segment_size = kDefaultSegmentSize;
  unsigned threads = 1;
  u64 memory_budget = kDefaultMemoryBudget;
};

/// Bytes needed for a table of the given limit: the SPF array plus the prime
/// list, sized by the Rosser-Schoenfeld bound pi(x) < 1.25506 x / log x.
inline u64 sieve_bytes_required(u64 limit) {
  const double x = static_cast<double>(std::max<u64>(limit, 17));
  const auto prime_estimate = static_cast<u64>(1.25506 * x / std::log(x)) + 1;
  return (limit + 1) * sizeof(std::uint32_t) + prime_estimate * sizeof(u64);
}

/// Smallest-prime-factor table over [2, limit] plus the ordered prime list.
/// Immutable once built; safe for concurrent reads.
class SieveTable {
public:
  u64 limit() const noexcept { return limit_; }
  u64 segment_size() const noexcept { return segment_size_; }
  std::span<const u64> primes() const noexcept { return primes_; }

  // Composite entries hold their smallest prime factor (always <= 2^20 under
  // the 2^40 limit cap); primes are stored as 0 and resolve to themselves.
  u64 spf(u64 n) const {
    detail::require(n >= 2 && n <= limit_, "spf: n outside [2, limit]");
    const auto s = spf_[n];
    return s == 0 ? n : s;
  }

  bool is_prime(u64 n) const {
    return n >= 2 && n <= limit_ && spf_[n] == 0;
  }

  // Number of primes <= x, by binary search in the prime list.
  u64 count_primes_up_to(u64 x) const {
    return static_cast<u64>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
  }

  friend bool operator==(const SieveTable&, const SieveTable&) = default;

private:
  friend SieveTable build_sieve(u64 limit, SieveOptions options);

  u64 limit_ = 0;
  u64 segment_size_ = 0;
  std::vector<std::uint32_t> spf_;
  std::vector<u64> primes_;
};

namespace detail {

inline std::vector<u64> simple_primes(u64 bound) {
  std::vector<bool> composite(bound + 1, false);
  std::vector<u64> out;
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 m = i * i; m <= bound; m += i) composite[m] = true;
  }
  return out;
}

// Sieves [lo, hi). Base primes are applied in increasing order and only
// unmarked cells are written, so each cell ends up with its smallest factor.
// Even multiples are claimed by p = 2; odd primes step over odd multiples.
inline void sieve_segment(std::span<std::uint32_t> spf, std::span<const u64> base,
                          u64 lo, u64 hi) {
  for (const u64 p : base) {
    if (p * p >= hi) break;
    u64 start = std::max(p * p, (lo + p - 1) / p * p);
    u64 step = p;
    if (p != 2) {
      if (start % 2 == 0) start += p;
      step = 2 * p;
    }
    for (u64 m = start; m < hi; m += step)
      if (spf[m] == 0) spf[m] = static_cast<std::uint32_t>(p);
  }
}

}  // namespace detail

/// Builds the SPF table. The result does not depend on segment_size or on
/// the thread count.
inline SieveTable build_sieve(u64 limit, SieveOptions options = {}) {
  detail::require(limit >= 2, "build_sieve: limit must be >= 2");
  detail::require(options.segment_size >= 2, "build_sieve: segment_size must be >= 2");
  detail::require(limit <= kMaxSieveLimit, "build_sieve: limit above 2^40 is not supported");
  const u64 need = sieve_bytes_required(limit);
  if (need > options.memory_budget)
    throw ResourceError("build_sieve: limit " + std::to_string(limit) + " needs about " +
                            std::to_string(need) + " bytes, budget is " +
                            std::to_string(options.memory_budget),
                        need);

  SieveTable t;
  t.limit_ = limit;
  t.segment_size_ = options.segment_size;
  t.spf_.assign(limit + 1, 0);

  const auto base = detail::simple_primes(isqrt(limit));
  std::span<std::uint32_t> cells(t.spf_);
  map_shards(2, limit + 1, options.segment_size, options.threads, [&](u64 lo, u64 hi) {
    detail::sieve_segment(cells, base, lo, hi);
    return char{0};
  });

  const double x = static_cast<double>(limit);
  t.primes_.reserve(static_cast<std::size_t>(1.25506 * x / std::log(std::max(x, 17.0))) + 8);
  for (u64 n = 2; n <= limit; ++n)
    if (t.spf_[n] == 0) t.primes_.push_back(n);
  return t;
}

inline SieveTable build_sieve(u64 limit, u64 segment_size) {
  return build_sieve(limit, SieveOptions{.segment_size = segment_size});
}

inline Factorization factorize(const SieveTable& table, u64 n) {
  detail::require(n >= 2 && n <= table.limit(), "factorize: n outside [2, limit]");
  Factorization f{n, {}};
  while (n > 1) {
    const u64 p = table.spf(n);
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.push_back({p, e});
  }
  return f;
}

/// p_n with p_1 = 2.
inline u64 nth_prime(const SieveTable& table, u64 n) {
  const auto primes = table.primes();
  detail::require(n >= 1 && n <= primes.size(), "nth_prime: index outside [1, prime count]");
  return primes[n - 1];
}

inline u64 largest_prime_factor(const SieveTable& table, u64 n) {
  detail::require(n >= 2 && n <= table.limit(), "largest_prime_factor: n outside [2, limit]");
  u64 p = 0;
  while (n > 1) {
    p = table.spf(n);
    while (n % p == 0) n /= p;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Binary prime-list cache.
//
// Layout (all little-endian u64): magic, version, limit, then the primes.

inline constexpr u64 kCacheMagic = 0x31424C4E54524D4Dull;  // "MMRTNLB1"
inline constexpr u64 kCacheVersion = 1;

struct PrimeCache {
  u64 limit = 0;
  std::vector<u64> primes;
};

namespace detail {

inline void put_le64(std::ostream& os, u64 v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), 8);
}

inline bool get_le64(std::istream& is, u64& v) {
  std::array<unsigned char, 8> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
  return true;
}

}  // namespace detail

inline void write_prime_cache(const std::filesystem::path& path, const SieveTable& table) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open cache file for writing: " + path.string());
  detail::put_le64(os, kCacheMagic);
  detail::put_le64(os, kCacheVersion);
  detail::put_le64(os, table.limit());
  for (const u64 p : table.primes()) detail::put_le64(os, p);
  if (!os) throw std::runtime_error("failed writing cache file: " + path.string());
}

/// Loads a cache, rejecting bad magic/version, a limit other than
/// `expected_limit` (when given) and malformed prime lists.
inline PrimeCache read_prime_cache(const std::filesystem::path& path,
                                   std::optional<u64> expected_limit = std::nullopt) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open cache file: " + path.string());
  u64 magic = 0, version = 0;
  PrimeCache cache;
  if (!detail::get_le64(is, magic) || magic != kCacheMagic)
    throw std::runtime_error("cache file has bad magic: " + path.string());
  if (!detail::get_le64(is, version) || version != kCacheVersion)
    throw std::runtime_error("cache file has unsupported version: " + path.string());
  if (!detail::get_le64(is, cache.limit))
    throw std::runtime_error("cache file truncated: " + path.string());
  if (expected_limit && cache.limit != *expected_limit)
    throw std::runtime_error("cache limit " + std::to_string(cache.limit) + " does not match " +
                             std::to_string(*expected_limit));
  u64 p = 0;
  while (detail::get_le64(is, p)) {
    if (p > cache.limit || (!cache.primes.empty() && p <= cache.primes.back()))
      throw std::runtime_error("cache prime list is malformed: " + path.string());
    cache.primes.push_back(p);
  }
  if (is.gcount() != 0) throw std::runtime_error("cache file has a partial record: " + path.string());
  return cache;
}

}  // namespace mertenslab
