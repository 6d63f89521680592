#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "compensated.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "sieve.hpp"

namespace mertenslab {

/// Lambda(n) = log p when n = p^a (a >= 1), else 0.
struct LambdaValue {
  u64 n = 0;
  double value = 0.0;
  std::optional<u64> base_prime;
};

inline LambdaValue lambda(const SieveTable& table, u64 n) {
  detail::require(n >= 1 && n <= table.limit(), "lambda: n outside [1, limit]");
  if (n == 1) return {1, 0.0, std::nullopt};
  const u64 p = table.spf(n);
  u64 m = n;
  while (m % p == 0) m /= p;
  if (m != 1) return {n, 0.0, std::nullopt};
  return {n, std::log(static_cast<double>(p)), p};
}

inline int mobius(const SieveTable& table, u64 n) {
  detail::require(n >= 1 && n <= table.limit(), "mobius: n outside [1, limit]");
  int mu = 1;
  while (n > 1) {
    const u64 p = table.spf(n);
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return mu;
}

namespace detail {

inline bool is_prime_trial(u64 p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (u64 d = 3; d <= p / d; d += 2)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

/// Exponent of p in n! (Legendre). Divides n repeatedly instead of forming
/// p^k, so it cannot overflow.
inline u64 legendre_valuation(u64 p, u64 n) {
  detail::require(detail::is_prime_trial(p), "legendre_valuation: p is not prime");
  u64 v = 0;
  while (n >= p) {
    n /= p;
    v += n;
  }
  return v;
}

inline double log_factorial_direct(u64 n) {
  CompensatedSum s;
  for (u64 k = 2; k <= n; ++k) s += std::log(static_cast<double>(k));
  return s.value();
}

/// log(n!) as sum over prime powers m <= n of Lambda(m) * floor(n/m).
inline double log_factorial_via_lambda(const SieveTable& table, u64 n) {
  detail::require(n >= 2 && n <= table.limit(), "log_factorial_via_lambda: n outside [2, limit]");
  CompensatedSum s;
  for (const u64 p : table.primes()) {
    if (p > n) break;
    const double lp = std::log(static_cast<double>(p));
    for (u64 m = p; m <= n; m *= p) {
      s += lp * static_cast<double>(n / m);
      if (m > n / p) break;
    }
  }
  return s.value();
}

/// Same double sum with the order of summation swapped: entry n equals
/// sum_{k <= n} sum_{d | k} Lambda(d), i.e. each step adds the Lambda-mass
/// of the prime-power divisors of n. Index 0 and 1 hold 0.
inline std::vector<double> log_factorial_via_lambda_prefix(const SieveTable& table, u64 n_max) {
  detail::require(n_max <= table.limit(), "log_factorial_via_lambda_prefix: n_max above limit");
  std::vector<double> out(n_max + 1, 0.0);
  CompensatedSum s;
  for (u64 n = 2; n <= n_max; ++n) {
    u64 m = n;
    while (m > 1) {
      const u64 p = table.spf(m);
      const double lp = std::log(static_cast<double>(p));
      while (m % p == 0) {
        m /= p;
        s += lp;  // one divisor p^j per power of p dividing n
      }
    }
    out[n] = s.value();
  }
  return out;
}

/// All divisors of f.n in increasing order.
inline std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    u64 pk = 1;
    for (unsigned j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<u64> divisors(const SieveTable& table, u64 n) {
  if (n == 1) return {1};
  return divisors(factorize(table, n));
}

/// Checks log k = sum_{d | k} Lambda(d) at relative tolerance 1e-12.
/// Witness: lhs = |difference|, rhs = 1e-12 * log k.
inline VerificationOutcome verify_log_sum_identity(const SieveTable& table, u64 k) {
  detail::require(k >= 1 && k <= table.limit(), "verify_log_sum_identity: k outside [1, limit]");
  CompensatedSum s;
  for (const u64 d : divisors(table, k)) s += lambda(table, d).value;
  const double log_k = std::log(static_cast<double>(k));
  OutcomeBuilder b("log_sum_identity", k, k);
  b.observe(k, std::fabs(s.value() - log_k), 1e-12 * log_k);
  return b.finish();
}

inline VerificationOutcome verify_log_sum_identity_range(const SieveTable& table, u64 k_max,
                                                         unsigned threads = 1) {
  detail::require(k_max >= 1 && k_max <= table.limit(), "verify_log_sum_identity_range: bad k_max");
  const auto shards = map_shards(1, k_max + 1, 1 << 14, threads, [&](u64 lo, u64 hi) {
    OutcomeBuilder b("", lo, hi - 1);
    for (u64 k = lo; k < hi; ++k) b.merge(verify_log_sum_identity(table, k));
    return b.finish();
  });
  OutcomeBuilder b("log_sum_identity", 1, k_max);
  for (const auto& s : shards) b.merge(s);
  return b.finish();
}

/// Psi(x) = sum_{n <= x} Lambda(n); iterates primes in increasing order.
inline double chebyshev_psi(const SieveTable& table, u64 x) {
  detail::require(x <= table.limit(), "chebyshev_psi: x above limit");
  CompensatedSum s;
  for (const u64 p : table.primes()) {
    if (p > x) break;
    unsigned k = 0;
    for (u64 y = x; y >= p; y /= p) ++k;
    s += static_cast<double>(k) * std::log(static_cast<double>(p));
  }
  return s.value();
}

/// theta(k) = log of the product of primes <= k.
inline double theta_log_primorial(const SieveTable& table, u64 k) {
  detail::require(k <= table.limit(), "theta_log_primorial: k above limit");
  CompensatedSum s;
  for (const u64 p : table.primes()) {
    if (p > k) break;
    s += std::log(static_cast<double>(p));
  }
  return s.value();
}

inline u64 prime_count(const SieveTable& table, u64 x) {
  detail::require(x <= table.limit(), "prime_count: x above limit");
  return table.count_primes_up_to(x);
}

enum class CumulativeKind { Psi, Theta, PiCount, LogFactorial };
enum class Arithmetic { ExactInteger, CompensatedFloat };

/// values[i] is the cumulative quantity at i, for i = 0..limit. PiCount
/// entries are exact integers (stored as doubles, exact below 2^53).
struct CumulativeTable {
  CumulativeKind kind = CumulativeKind::Psi;
  u64 limit = 0;
  std::vector<double> values;
  Arithmetic arithmetic = Arithmetic::CompensatedFloat;

  double operator[](u64 i) const { return values.at(i); }
};

inline CumulativeTable build_cumulative(const SieveTable& table, CumulativeKind kind, u64 limit) {
  detail::require(limit <= table.limit() || kind == CumulativeKind::LogFactorial,
                  "build_cumulative: limit above sieve limit");
  CumulativeTable t{kind, limit, std::vector<double>(limit + 1, 0.0),
                    kind == CumulativeKind::PiCount ? Arithmetic::ExactInteger
                                                    : Arithmetic::CompensatedFloat};
  CompensatedSum s;
  u64 count = 0;
  for (u64 n = 2; n <= limit; ++n) {
    switch (kind) {
      case CumulativeKind::Psi: s += lambda(table, n).value; break;
      case CumulativeKind::Theta:
        if (table.is_prime(n)) s += std::log(static_cast<double>(n));
        break;
      case CumulativeKind::PiCount:
        if (table.is_prime(n)) ++count;
        break;
      case CumulativeKind::LogFactorial: s += std::log(static_cast<double>(n)); break;
    }
    t.values[n] = kind == CumulativeKind::PiCount ? static_cast<double>(count) : s.value();
  }
  return t;
}

/// Generalized von Mangoldt function: sum_{d | n} mu(d) log^k(n/d). Only
/// squarefree d contribute, so the sum runs over subsets of the distinct
/// prime factors.
inline double generalized_lambda(const SieveTable& table, u64 n, unsigned k) {
  detail::require(n >= 1 && n <= table.limit(), "generalized_lambda: n outside [1, limit]");
  detail::require(k >= 1, "generalized_lambda: k must be >= 1");
  if (n == 1) return 0.0;
  const auto f = factorize(table, n);
  const std::size_t r = f.factors.size();
  CompensatedSum s;
  for (u64 mask = 0; mask < (u64{1} << r); ++mask) {
    u64 d = 1;
    for (std::size_t i = 0; i < r; ++i)
      if (mask & (u64{1} << i)) d *= f.factors[i].prime;
    const double term = std::pow(std::log(static_cast<double>(n / d)), static_cast<double>(k));
    s += (std::popcount(mask) % 2 == 0) ? term : -term;
  }
  return s.value();
}

/// Selberg: Lambda(n) log n + sum_{d|n} Lambda(d) Lambda(n/d)
///          = sum_{d|n} mu(d) log^2(n/d), absolute tolerance 1e-9.
/// Witness: lhs = |difference|, rhs = 1e-9.
inline VerificationOutcome verify_selberg_identity(const SieveTable& table, u64 n) {
  detail::require(n >= 1 && n <= table.limit(), "verify_selberg_identity: n outside [1, limit]");
  CompensatedSum left, right;
  left += lambda(table, n).value * std::log(static_cast<double>(n));
  for (const u64 d : divisors(table, n)) {
    left += lambda(table, d).value * lambda(table, n / d).value;
    const double l = std::log(static_cast<double>(n / d));
    right += mobius(table, d) * l * l;
  }
  OutcomeBuilder b("selberg_identity", n, n);
  b.observe(n, std::fabs(left.value() - right.value()), 1e-9);
  return b.finish();
}

inline VerificationOutcome verify_selberg_identity_range(const SieveTable& table, u64 n_max,
                                                         unsigned threads = 1) {
  detail::require(n_max >= 1 && n_max <= table.limit(), "verify_selberg_identity_range: bad n_max");
  const auto shards = map_shards(1, n_max + 1, 1 << 12, threads, [&](u64 lo, u64 hi) {
    OutcomeBuilder b("", lo, hi - 1);
    for (u64 n = lo; n < hi; ++n) b.merge(verify_selberg_identity(table, n));
    return b.finish();
  });
  OutcomeBuilder b("selberg_identity", 1, n_max);
  for (const auto& s : shards) b.merge(s);
  return b.finish();
}

/// Exact integer form of the log-factorial identity: for every n <= n_max
/// and prime p <= n, legendre_valuation(p, n) equals the exponent of p
/// accumulated from factorize(2..n). Witness lhs/rhs are the two exponents.
inline VerificationOutcome verify_legendre_exact(const SieveTable& table, u64 n_max) {
  detail::require(n_max >= 2 && n_max <= table.limit(), "verify_legendre_exact: bad n_max");
  OutcomeBuilder b("legendre_exact", 2, n_max);
  std::vector<u64> exponent(n_max + 1, 0);
  const auto primes = table.primes();
  for (u64 n = 2; n <= n_max; ++n) {
    for (const auto& [p, e] : factorize(table, n).factors) exponent[p] += e;
    for (const u64 p : primes) {
      if (p > n) break;
      const u64 v = legendre_valuation(p, n);
      if (v != exponent[p] || n == n_max)
        b.observe_exact(n, static_cast<double>(exponent[p]), static_cast<double>(v),
                        v == exponent[p]);
    }
  }
  return b.finish();
}

/// Float form: |direct - via Lambda| / direct <= rel_tol for 2 <= n <= n_max.
/// Every n is compared against the swapped-order prefix; the literal
/// prime-power sum is compared on n <= literal_max, on multiples of
/// literal_stride and at n_max.
inline VerificationOutcome verify_log_factorial_float(const SieveTable& table, u64 n_max,
                                                      double rel_tol = 1e-11,
                                                      u64 literal_max = 10000,
                                                      u64 literal_stride = 1009) {
  detail::require(n_max >= 2 && n_max <= table.limit(), "verify_log_factorial_float: bad n_max");
  OutcomeBuilder b("log_factorial_identity", 2, n_max);
  const auto via = log_factorial_via_lambda_prefix(table, n_max);
  CompensatedSum direct;
  for (u64 n = 2; n <= n_max; ++n) {
    direct += std::log(static_cast<double>(n));
    const double d = direct.value();
    b.observe(n, std::fabs(d - via[n]) / d, rel_tol);
    if (n <= literal_max || n % literal_stride == 0 || n == n_max)
      b.observe(n, std::fabs(d - log_factorial_via_lambda(table, n)) / d, rel_tol);
  }
  return b.finish();
}

/// generalized_lambda(n, 1) == lambda(n) within 1e-12 for n in [1, n_max].
/// Witness: lhs = |difference|, rhs = 1e-12.
inline VerificationOutcome verify_generalized_lambda_k1(const SieveTable& table, u64 n_max) {
  detail::require(n_max >= 1 && n_max <= table.limit(), "verify_generalized_lambda_k1: bad n_max");
  OutcomeBuilder b("generalized_lambda_k1", 1, n_max);
  for (u64 n = 1; n <= n_max; ++n)
    b.observe(n, std::fabs(generalized_lambda(table, n, 1) - lambda(table, n).value), 1e-12);
  return b.finish();
}

/// Psi(x) - theta(x) >= 0, and == 0 exactly when no p^k <= x has k >= 2
/// (i.e. x < 4). Both sides come from cumulative tables.
inline VerificationOutcome verify_psi_theta_gap(const SieveTable& table, u64 x_max) {
  detail::require(x_max <= table.limit(), "verify_psi_theta_gap: x_max above limit");
  const auto psi = build_cumulative(table, CumulativeKind::Psi, x_max);
  const auto theta = build_cumulative(table, CumulativeKind::Theta, x_max);
  OutcomeBuilder b("psi_theta_gap", 0, x_max);
  for (u64 x = 0; x <= x_max; ++x) {
    const double gap = psi[x] - theta[x];
    const bool ok = x < 4 ? gap == 0.0 : gap > 0.0;
    b.observe_exact(x, theta[x], psi[x], ok);
  }
  return b.finish();
}

}  // namespace mertenslab
