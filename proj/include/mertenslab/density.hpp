#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "arith.hpp"
#include "compensated.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "sieve.hpp"

namespace mertenslab {

/// True iff the largest prime factor P of n satisfies P^2 > n. Integer
/// comparison, so n = p^2 is excluded exactly.
inline bool has_large_prime_factor(const SieveTable& table, u64 n) {
  detail::require(n >= 2 && n <= table.limit(), "has_large_prime_factor: n outside [2, limit]");
  const u64 p = largest_prime_factor(table, n);
  return p > n / p;
}

/// |{2 <= n <= x : has_large_prime_factor(n)}| by factoring every n.
inline u64 census_oracle(const SieveTable& table, u64 x, unsigned threads = 1) {
  detail::require(x >= 2 && x <= table.limit(), "census_oracle: x outside [2, limit]");
  const auto parts = map_shards(2, x + 1, 1 << 16, threads, [&](u64 lo, u64 hi) {
    u64 c = 0;
    for (u64 n = lo; n < hi; ++n) c += has_large_prime_factor(table, n);
    return c;
  });
  u64 total = 0;
  for (const u64 c : parts) total += c;
  return total;
}

/// out[x] = census_oracle(x) for x in [2, x_max]; out[0] = out[1] = 0.
inline std::vector<u64> census_prefix(const SieveTable& table, u64 x_max) {
  detail::require(x_max >= 2 && x_max <= table.limit(), "census_prefix: x_max outside [2, limit]");
  std::vector<u64> out(x_max + 1, 0);
  for (u64 n = 2; n <= x_max; ++n) out[n] = out[n - 1] + has_large_prime_factor(table, n);
  return out;
}

/// G(x) = sum_{p <= x} min(p - 1, floor(x / p)): the number of pairs (p, q)
/// with p prime and q < p <= x / q.
inline u64 g_count(const SieveTable& table, u64 x) {
  detail::require(x >= 2 && x <= table.limit(), "g_count: x outside [2, limit]");
  u64 g = 0;
  for (const u64 p : table.primes()) {
    if (p > x) break;
    g += std::min(p - 1, x / p);
  }
  return g;
}

/// eta(x) = 1/2 + sqrt(1/4 + x): the primes with p - 1 <= floor(x/p) are
/// exactly those p <= eta(x).
inline double eta(u64 x) {
  detail::require(x >= 1, "eta: x must be >= 1");
  return 0.5 + std::sqrt(0.25 + static_cast<double>(x));
}

struct GSplit {
  u64 small_part = 0;  // sum_{p <= sqrt x} (p - 1)
  u64 large_part = 0;  // sum_{sqrt x < p <= x} floor(x / p)

  u64 total() const noexcept { return small_part + large_part; }
};

inline GSplit g_count_split(const SieveTable& table, u64 x) {
  detail::require(x >= 2 && x <= table.limit(), "g_count_split: x outside [2, limit]");
  GSplit s;
  for (const u64 p : table.primes()) {
    if (p > x) break;
    if (p <= x / p)
      s.small_part += p - 1;
    else
      s.large_part += x / p;
  }
  return s;
}

struct LargeFactorCensus {
  u64 x = 0;
  u64 g_value = 0;
  std::optional<u64> oracle_count;
  double density = 0.0;
  double eta = 0.0;
};

inline LargeFactorCensus large_factor_census(const SieveTable& table, u64 x, bool with_oracle,
                                             unsigned threads = 1) {
  LargeFactorCensus c;
  c.x = x;
  c.g_value = g_count(table, x);
  if (with_oracle) c.oracle_count = census_oracle(table, x, threads);
  c.density = static_cast<double>(c.g_value) / static_cast<double>(x);
  c.eta = eta(x);
  return c;
}

/// Rows: observed G(x)/x, predicted log 2, tolerance c / log x.
inline ResidualReport density_series(const SieveTable& table, std::span<const u64> xs, double c = 3.0) {
  detail::require(!xs.empty(), "density_series: xs is empty");
  std::vector<ResidualRow> rows;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const u64 x = xs[i];
    detail::require(i == 0 || xs[i - 1] < x, "density_series: xs must be strictly increasing");
    detail::require(x >= 100 && x <= table.limit(), "density_series: x outside [100, limit]");
    const double observed = static_cast<double>(g_count(table, x)) / static_cast<double>(x);
    rows.push_back({x, observed, std::numbers::ln2, observed - std::numbers::ln2,
                    c / std::log(static_cast<double>(x))});
  }
  return detail::finish_report(Law::DensityLog2, std::move(rows));
}

/// sum over primes sqrt(n) < p <= n of 1/p (strict lower end, p^2 > n).
inline double rough_tail_sum(const SieveTable& table, u64 n) {
  detail::require(n >= 4 && n <= table.limit(), "rough_tail_sum: n outside [4, limit]");
  CompensatedSum s;
  for (const u64 p : table.primes()) {
    if (p > n) break;
    if (p > n / p) s += 1.0 / static_cast<double>(p);
  }
  return s.value();
}

inline ResidualReport rough_tail_report(const SieveTable& table, std::span<const u64> xs, double c = 1.0) {
  detail::require(!xs.empty(), "rough_tail_report: xs is empty");
  std::vector<ResidualRow> rows;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    detail::require(i == 0 || xs[i - 1] < xs[i], "rough_tail_report: xs must be strictly increasing");
    const double v = rough_tail_sum(table, xs[i]);
    rows.push_back({xs[i], v, std::numbers::ln2, v - std::numbers::ln2,
                    c / std::log(static_cast<double>(xs[i]))});
  }
  return detail::finish_report(Law::RoughTailLog2, std::move(rows));
}

// ---------------------------------------------------------------------------
// Range checks

/// g_count(x) == census_oracle(x) for every x in [2, x_max], exact.
inline VerificationOutcome verify_bijection_range(const SieveTable& table, u64 x_max,
                                                  unsigned threads = 1) {
  detail::require(x_max >= 2 && x_max <= table.limit(), "verify_bijection_range: bad x_max");
  const auto oracle = census_prefix(table, x_max);
  const auto shards = map_shards(2, x_max + 1, 1 << 12, threads, [&](u64 lo, u64 hi) {
    OutcomeBuilder b("", lo, hi - 1);
    for (u64 x = lo; x < hi; ++x) {
      const u64 g = g_count(table, x);
      b.observe_exact(x, static_cast<double>(g), static_cast<double>(oracle[x]), g == oracle[x]);
    }
    return b.finish();
  });
  OutcomeBuilder b("g_count_bijection", 2, x_max);
  for (const auto& s : shards) b.merge(s);
  return b.finish();
}

/// Single-point form: g_count(x) == census_oracle(x).
inline VerificationOutcome verify_bijection_at(const SieveTable& table, u64 x, unsigned threads = 1) {
  const u64 g = g_count(table, x);
  const u64 o = census_oracle(table, x, threads);
  OutcomeBuilder b("g_count_bijection", x, x);
  b.observe_exact(x, static_cast<double>(g), static_cast<double>(o), g == o);
  return b.finish();
}

/// small + large parts of the split equal g_count(x), exact.
inline VerificationOutcome verify_split_identity(const SieveTable& table, u64 x_max) {
  detail::require(x_max >= 2 && x_max <= table.limit(), "verify_split_identity: bad x_max");
  OutcomeBuilder b("g_split_identity", 2, x_max);
  for (u64 x = 2; x <= x_max; ++x) {
    const auto s = g_count_split(table, x);
    const u64 g = g_count(table, x);
    b.observe_exact(x, static_cast<double>(s.total()), static_cast<double>(g), s.total() == g);
  }
  return b.finish();
}

/// For every x in [1, x_max]: at most one prime lies in (sqrt x, eta(x)],
/// and any such p has floor(x/p) = p - 1. Membership uses the integer forms
/// p^2 > x and p(p - 1) <= x, cross-checked against the floating eta(x).
/// Witness lhs = primes found in the interval, rhs = 1.
inline VerificationOutcome verify_eta_interval(const SieveTable& table, u64 x_max) {
  detail::require(x_max >= 1 && x_max + 2 <= table.limit(), "verify_eta_interval: bad x_max");
  OutcomeBuilder b("eta_interval", 1, x_max);
  for (u64 x = 1; x <= x_max; ++x) {
    const double e = eta(x);
    u64 found = 0;
    bool ok = true;
    u64 p = isqrt(x) + 1;
    for (; p * (p - 1) <= x; ++p) {
      ok = ok && static_cast<double>(p) <= e;
      if (!table.is_prime(p)) continue;
      ++found;
      ok = ok && x / p == p - 1;
    }
    ok = ok && static_cast<double>(p) > e && found <= 1;
    b.observe_exact(x, static_cast<double>(found), 1.0, ok);
  }
  return b.finish();
}

/// sum_{p <= sqrt x} (p - 1) <= pi(sqrt x) sqrt x <= e x / log(sqrt x) for
/// x in [x_lo, x_max]. Witness: lhs = pi(sqrt x) sqrt x, rhs = e x / log sqrt x.
inline VerificationOutcome verify_small_part_bound(const SieveTable& table, u64 x_max, u64 x_lo = 10) {
  detail::require(x_lo >= 10 && x_lo <= x_max && x_max <= table.limit(),
                  "verify_small_part_bound: bad range");
  OutcomeBuilder b("g_small_part_bound", x_lo, x_max, 1e-9);
  const auto primes = table.primes();
  std::size_t i = 0;
  u64 small = 0;
  for (u64 x = x_lo; x <= x_max; ++x) {
    const u64 r = isqrt(x);
    for (; i < primes.size() && primes[i] <= r; ++i) small += primes[i] - 1;
    const double root = std::sqrt(static_cast<double>(x));
    const double middle = static_cast<double>(i) * root;
    const double right = std::numbers::e * static_cast<double>(x) / std::log(root);
    b.observe(x, static_cast<double>(small), middle);
    b.observe(x, middle, right);
  }
  return b.finish();
}

}  // namespace mertenslab
