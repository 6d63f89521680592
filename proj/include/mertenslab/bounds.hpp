#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "arith.hpp"
#include "compensated.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "report.hpp"
#include "sieve.hpp"

namespace mertenslab {

// Float checks fail only when rhs - lhs < -kBoundSlack.
inline constexpr double kBoundSlack = 1e-9;

namespace detail {

// Running compensated log(k!) for k = 0..n.
inline std::vector<double> log_factorials(u64 n) {
  std::vector<double> out(n + 1, 0.0);
  CompensatedSum s;
  for (u64 k = 2; k <= n; ++k) {
    s += std::log(static_cast<double>(k));
    out[k] = s.value();
  }
  return out;
}

inline u128 binomial_exact(u64 n, u64 k) {
  u128 c = 1;
  for (u64 i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

inline double u128_to_double(u128 v) { return static_cast<double>(v); }

}  // namespace detail

/// 4^n / (2n + 1) <= C(2n, n) <= 4^n for n = 1..n_max, in log space, with
/// an exact 128-bit check for n <= 30.
inline VerificationOutcome check_binomial_bounds(u64 n_max) {
  detail::require(n_max >= 1, "check_binomial_bounds: n_max must be >= 1");
  OutcomeBuilder b("binomial_bounds", 1, n_max, kBoundSlack);
  const auto lf = detail::log_factorials(2 * n_max);
  const double log4 = 2.0 * std::numbers::ln2;
  for (u64 n = 1; n <= n_max; ++n) {
    const double log_c = lf[2 * n] - 2.0 * lf[n];
    const double log_4n = static_cast<double>(n) * log4;
    b.observe(n, log_c, log_4n);
    b.observe(n, log_4n - std::log(static_cast<double>(2 * n + 1)), log_c);
    if (n <= 30) {
      const u128 c = detail::binomial_exact(2 * n, n);
      const u128 four_n = u128{1} << (2 * n);
      b.observe_exact(n, detail::u128_to_double(c), detail::u128_to_double(four_n), c <= four_n);
      b.observe_exact(n, detail::u128_to_double(four_n), detail::u128_to_double(c * (2 * n + 1)),
                      four_n <= c * (2 * n + 1));
    }
  }
  return b.finish();
}

/// Psi(2n) - Psi(n) <= 2n log 2 for n = 1..n_max.
inline VerificationOutcome check_psi_dyadic(const SieveTable& table, u64 n_max) {
  detail::require(n_max >= 1 && 2 * n_max <= table.limit(), "check_psi_dyadic: 2 n_max above limit");
  const auto psi = build_cumulative(table, CumulativeKind::Psi, 2 * n_max);
  OutcomeBuilder b("psi_dyadic", 1, n_max, kBoundSlack);
  for (u64 n = 1; n <= n_max; ++n)
    b.observe(n, psi[2 * n] - psi[n], 2.0 * static_cast<double>(n) * std::numbers::ln2);
  return b.finish();
}

/// c1 x <= Psi(x) <= c2 x for x in [x_lo, x_max].
inline VerificationOutcome check_psi_linear(const SieveTable& table, u64 x_max, double c1 = 0.3,
                                            double c2 = 1.2, u64 x_lo = 2) {
  detail::require(x_lo >= 1 && x_lo <= x_max && x_max <= table.limit(), "check_psi_linear: bad range");
  detail::require(0.0 < c1 && c1 < c2, "check_psi_linear: need 0 < c1 < c2");
  const auto psi = build_cumulative(table, CumulativeKind::Psi, x_max);
  OutcomeBuilder b("psi_linear", x_lo, x_max, kBoundSlack);
  for (u64 x = x_lo; x <= x_max; ++x) {
    const double xd = static_cast<double>(x);
    b.observe(x, c1 * xd, psi[x]);
    b.observe(x, psi[x], c2 * xd);
  }
  return b.finish();
}

/// theta(k) <= k log 4 for k = 1..k_max; exact 128-bit primorial <= 4^k for
/// k <= 60.
inline VerificationOutcome check_primorial_bound(const SieveTable& table, u64 k_max) {
  detail::require(k_max >= 1 && k_max <= table.limit(), "check_primorial_bound: k_max outside [1, limit]");
  const auto theta = build_cumulative(table, CumulativeKind::Theta, k_max);
  OutcomeBuilder b("primorial_bound", 1, k_max, kBoundSlack);
  u128 primorial = 1;
  for (u64 k = 1; k <= k_max; ++k) {
    b.observe(k, theta[k], static_cast<double>(k) * 2.0 * std::numbers::ln2);
    if (k <= 60) {
      if (table.is_prime(k)) primorial *= k;
      const u128 four_k = u128{1} << (2 * k);
      b.observe_exact(k, detail::u128_to_double(primorial), detail::u128_to_double(four_k),
                      primorial <= four_k);
    }
  }
  return b.finish();
}

/// sum_{m+1 < p <= 2m+1} log p <= m log 4 for m = 1..m_max; for m <= 30 the
/// interval primorial is checked exactly to divide C(2m+1, m+1) and to be
/// at most 4^m.
inline VerificationOutcome check_interval_primorial(const SieveTable& table, u64 m_max) {
  detail::require(m_max >= 1 && 2 * m_max + 1 <= table.limit(),
                  "check_interval_primorial: 2 m_max + 1 above limit");
  const auto theta = build_cumulative(table, CumulativeKind::Theta, 2 * m_max + 1);
  OutcomeBuilder b("interval_primorial", 1, m_max, kBoundSlack);
  for (u64 m = 1; m <= m_max; ++m) {
    b.observe(m, theta[2 * m + 1] - theta[m + 1], static_cast<double>(m) * 2.0 * std::numbers::ln2);
    if (m <= 30) {
      u128 product = 1;
      for (u64 p = m + 2; p <= 2 * m + 1; ++p)
        if (table.is_prime(p)) product *= p;
      const u128 c = detail::binomial_exact(2 * m + 1, m + 1);
      const u128 four_m = u128{1} << (2 * m);
      b.observe_exact(m, detail::u128_to_double(product), detail::u128_to_double(four_m),
                      product <= four_m && c % product == 0 && c <= four_m);
    }
  }
  return b.finish();
}

/// log(m!) > m (log m - 1) for m = 1..m_max.
inline VerificationOutcome check_stirling_lower(u64 m_max) {
  detail::require(m_max >= 1, "check_stirling_lower: m_max must be >= 1");
  OutcomeBuilder b("stirling_lower", 1, m_max, kBoundSlack);
  CompensatedSum lf;
  for (u64 m = 1; m <= m_max; ++m) {
    if (m >= 2) lf += std::log(static_cast<double>(m));
    const double md = static_cast<double>(m);
    b.observe(m, md * (std::log(md) - 1.0), lf.value());
  }
  return b.finish();
}

/// pi(n) <= e n / log n for n = 3..n_max.
inline VerificationOutcome check_pi_upper(const SieveTable& table, u64 n_max) {
  detail::require(n_max >= 3 && n_max <= table.limit(), "check_pi_upper: n_max outside [3, limit]");
  OutcomeBuilder b("pi_upper", 3, n_max, kBoundSlack);
  u64 count = 1;  // pi(2)
  for (u64 n = 3; n <= n_max; ++n) {
    count += table.is_prime(n);
    const double nd = static_cast<double>(n);
    b.observe(n, static_cast<double>(count), std::numbers::e * nd / std::log(nd));
  }
  return b.finish();
}

/// p_n < n log n + n log log n for n = 6..n_max.
inline VerificationOutcome check_dusart(const SieveTable& table, u64 n_max) {
  detail::require(n_max >= 6, "check_dusart: n_max must be >= 6");
  detail::require(n_max <= table.primes().size(), "check_dusart: not enough primes in table");
  OutcomeBuilder b("dusart_upper", 6, n_max, kBoundSlack);
  for (u64 n = 6; n <= n_max; ++n) {
    const double nd = static_cast<double>(n);
    const double ln = std::log(nd);
    b.observe(n, static_cast<double>(nth_prime(table, n)), nd * ln + nd * std::log(ln));
  }
  return b.finish();
}

/// sum_{p <= n} 1/p >= log log(n + 1) - log(pi^2/6) for n = 2..n_max.
inline VerificationOutcome check_reciprocal_lower(const SieveTable& table, u64 n_max) {
  detail::require(n_max >= 2 && n_max <= table.limit(), "check_reciprocal_lower: n_max outside [2, limit]");
  OutcomeBuilder b("reciprocal_lower", 2, n_max, kBoundSlack);
  const double log_zeta2 = std::log(constants::pi_squared_over_6);
  CompensatedSum s;
  for (u64 n = 2; n <= n_max; ++n) {
    if (table.is_prime(n)) s += 1.0 / static_cast<double>(n);
    b.observe(n, std::log(std::log(static_cast<double>(n + 1))) - log_zeta2, s.value());
  }
  return b.finish();
}

/// |sum_{p <= n} log p / p - log n| <= bound for n = 2..n_max.
/// Witness: lhs = |deviation|, rhs = bound.
inline VerificationOutcome check_mertens_bound(const SieveTable& table, u64 n_max, double bound = 2.0) {
  detail::require(n_max >= 2 && n_max <= table.limit(), "check_mertens_bound: n_max outside [2, limit]");
  OutcomeBuilder b("mertens_first_bound", 2, n_max, kBoundSlack);
  CompensatedSum s;
  for (u64 n = 2; n <= n_max; ++n) {
    const double nd = static_cast<double>(n);
    if (table.is_prime(n)) s += std::log(nd) / nd;
    b.observe(n, std::fabs(s.value() - std::log(nd)), bound);
  }
  return b.finish();
}

}  // namespace mertenslab
