#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "compensated.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "report.hpp"
#include "sieve.hpp"

namespace mertenslab {

/// sum_{m <= x} Lambda(m)/m, grouped by prime then by power.
inline double sum_lambda_over_n(const SieveTable& table, u64 x) {
  detail::require(x >= 2 && x <= table.limit(), "sum_lambda_over_n: x outside [2, limit]");
  CompensatedSum s;
  for (const u64 p : table.primes()) {
    if (p > x) break;
    const double lp = std::log(static_cast<double>(p));
    for (u64 m = p;; m *= p) {
      s += lp / static_cast<double>(m);
      if (m > x / p) break;
    }
  }
  return s.value();
}

/// A(x) = sum_{p <= x} log(p)/p.
inline double mertens_first_sum(const SieveTable& table, u64 x) {
  detail::require(x >= 2 && x <= table.limit(), "mertens_first_sum: x outside [2, limit]");
  CompensatedSum s;
  for (const u64 p : table.primes()) {
    if (p > x) break;
    s += std::log(static_cast<double>(p)) / static_cast<double>(p);
  }
  return s.value();
}

/// S(x) = sum_{p <= x} 1/p.
inline double reciprocal_prime_sum(const SieveTable& table, u64 x) {
  detail::require(x >= 2 && x <= table.limit(), "reciprocal_prime_sum: x outside [2, limit]");
  CompensatedSum s;
  for (const u64 p : table.primes()) {
    if (p > x) break;
    s += 1.0 / static_cast<double>(p);
  }
  return s.value();
}

// ---------------------------------------------------------------------------
// Abel summation

struct AbelWeight {
  u64 index;
  double a;
};

namespace detail {

inline void check_abel_args(std::span<const AbelWeight> weights, double lower, double upper) {
  require(lower < upper, "abel_summation: lower must be < upper");
  for (std::size_t i = 1; i < weights.size(); ++i)
    require(weights[i - 1].index <= weights[i].index, "abel_summation: weights not sorted by index");
}

}  // namespace detail

/// A(upper) f(upper) - int_lower^upper A(t) f'(t) dt with A(t) the partial
/// sum of the weights with index <= t. A is a step function, so the
/// integral is the exact sum of A_i (f(t_{i+1}) - f(t_i)) over its pieces.
template <class F>
double abel_summation(std::span<const AbelWeight> weights, F&& f, double lower, double upper) {
  detail::check_abel_args(weights, lower, upper);
  CompensatedSum partial;
  std::size_t i = 0;
  for (; i < weights.size() && static_cast<double>(weights[i].index) <= lower; ++i)
    partial += weights[i].a;

  CompensatedSum integral;
  double t_prev = lower;
  double f_prev = f(lower);
  for (; i < weights.size() && static_cast<double>(weights[i].index) <= upper; ++i) {
    const double t = static_cast<double>(weights[i].index);
    const double ft = f(t);
    if (t > t_prev) integral += partial.value() * (ft - f_prev);
    partial += weights[i].a;
    t_prev = t;
    f_prev = ft;
  }
  const double f_upper = f(upper);
  if (upper > t_prev) integral += partial.value() * (f_upper - f_prev);
  return partial.value() * f_upper - integral.value();
}

/// Same boundary-plus-integral form, with each piece of A(t) f'(t)
/// integrated by composite Simpson using `steps` subintervals. Used to
/// cross-check the exact form when only f' is trusted.
template <class F, class FPrime>
double abel_summation_quadrature(std::span<const AbelWeight> weights, F&& f, FPrime&& f_prime,
                                 double lower, double upper, int steps) {
  detail::check_abel_args(weights, lower, upper);
  detail::require(steps >= 1, "abel_summation_quadrature: steps must be >= 1");
  const int n = steps % 2 == 0 ? steps : steps + 1;
  auto simpson = [&](double a, double b) {
    const double h = (b - a) / n;
    CompensatedSum s;
    s += f_prime(a);
    s += f_prime(b);
    for (int j = 1; j < n; ++j) s += (j % 2 ? 4.0 : 2.0) * f_prime(a + j * h);
    return s.value() * h / 3.0;
  };

  CompensatedSum partial;
  std::size_t i = 0;
  for (; i < weights.size() && static_cast<double>(weights[i].index) <= lower; ++i)
    partial += weights[i].a;
  CompensatedSum integral;
  double t_prev = lower;
  for (; i < weights.size() && static_cast<double>(weights[i].index) <= upper; ++i) {
    const double t = static_cast<double>(weights[i].index);
    if (t > t_prev) integral += partial.value() * simpson(t_prev, t);
    partial += weights[i].a;
    t_prev = t;
  }
  if (upper > t_prev) integral += partial.value() * simpson(t_prev, upper);
  return partial.value() * f(upper) - integral.value();
}

/// Weights a_p = log(p)/p for p <= x, the sequence fed to Abel summation
/// with f(t) = 1/log t to recover sum 1/p.
inline std::vector<AbelWeight> log_p_over_p_weights(const SieveTable& table, u64 x) {
  std::vector<AbelWeight> w;
  for (const u64 p : table.primes()) {
    if (p > x) break;
    w.push_back({p, std::log(static_cast<double>(p)) / static_cast<double>(p)});
  }
  return w;
}

/// sum_{p <= x} 1/p rebuilt by Abel summation from a_p = log p / p.
inline double reciprocal_prime_sum_via_abel(const SieveTable& table, u64 x) {
  detail::require(x >= 2 && x <= table.limit(), "reciprocal_prime_sum_via_abel: x outside [2, limit]");
  const auto w = log_p_over_p_weights(table, x);
  const auto f = [](double t) { return 1.0 / std::log(t); };
  // [2, 2.5] holds only the step at 2 and keeps lower < upper.
  if (x == 2) return abel_summation(w, f, 2.0, 2.5);
  return abel_summation(w, f, 2.0, static_cast<double>(x));
}

// ---------------------------------------------------------------------------
// Sampled series and residual reports

enum class SeriesKind { LambdaOverN, LogPOverP, ReciprocalPrimes, LogZetaTruncation };

struct ArithSeries {
  SeriesKind kind = SeriesKind::ReciprocalPrimes;
  std::vector<std::pair<u64, double>> samples;
};

namespace detail {

inline void require_increasing(std::span<const u64> xs, const char* who) {
  require(!xs.empty(), std::string(who) + ": xs is empty");
  for (std::size_t i = 1; i < xs.size(); ++i)
    require(xs[i - 1] < xs[i], std::string(who) + ": xs must be strictly increasing");
}

}  // namespace detail

/// Evaluates one of the prime sums at every x in xs in a single pass. Each
/// sample equals the corresponding point evaluation bit for bit, since the
/// running sum adds the same terms in the same order.
inline ArithSeries sample_prime_sum(const SieveTable& table, SeriesKind kind, std::span<const u64> xs) {
  detail::require_increasing(xs, "sample_prime_sum");
  detail::require(kind != SeriesKind::LogZetaTruncation, "sample_prime_sum: use log_zeta_truncation");
  detail::require(xs.front() >= 2 && xs.back() <= table.limit(), "sample_prime_sum: xs outside [2, limit]");
  ArithSeries out{kind, {}};
  if (kind == SeriesKind::LambdaOverN) {
    for (const u64 x : xs) out.samples.emplace_back(x, sum_lambda_over_n(table, x));
    return out;
  }
  CompensatedSum s;
  const auto primes = table.primes();
  std::size_t i = 0;
  for (const u64 x : xs) {
    for (; i < primes.size() && primes[i] <= x; ++i) {
      const double p = static_cast<double>(primes[i]);
      s += kind == SeriesKind::LogPOverP ? std::log(p) / p : 1.0 / p;
    }
    out.samples.emplace_back(x, s.value());
  }
  return out;
}

/// Rows: observed S(x), predicted log log x + m_reference, tolerance
/// c / log x.
inline ResidualReport sumpar_residual_report(const SieveTable& table, std::span<const u64> xs,
                                             double m_reference, double c = 1.0) {
  detail::require_increasing(xs, "sumpar_residual_report");
  detail::require(xs.front() >= 3 && xs.back() <= table.limit(),
                  "sumpar_residual_report: xs outside [3, limit]");
  const auto series = sample_prime_sum(table, SeriesKind::ReciprocalPrimes, xs);
  std::vector<ResidualRow> rows;
  for (const auto& [x, s] : series.samples) {
    const double lx = std::log(static_cast<double>(x));
    const double predicted = std::log(lx) + m_reference;
    rows.push_back({x, s, predicted, s - predicted, c / lx});
  }
  return detail::finish_report(Law::SumparLogLogX, std::move(rows));
}

/// Residual of sum_{m<=x} Lambda(m)/m or sum_{p<=x} log p/p against log x,
/// with a constant tolerance.
inline ResidualReport log_x_residual_report(const SieveTable& table, Law law, std::span<const u64> xs,
                                            double tolerance = 2.0) {
  detail::require(law == Law::NewmanLogX || law == Law::Mertens1LogX,
                  "log_x_residual_report: law must be NewmanLogX or Mertens1LogX");
  const auto series = sample_prime_sum(
      table, law == Law::NewmanLogX ? SeriesKind::LambdaOverN : SeriesKind::LogPOverP, xs);
  std::vector<ResidualRow> rows;
  for (const auto& [x, v] : series.samples) {
    const double lx = std::log(static_cast<double>(x));
    rows.push_back({x, v, lx, v - lx, tolerance});
  }
  return detail::finish_report(law, std::move(rows));
}

// ---------------------------------------------------------------------------
// Meissel-Mertens constant

/// M ~ S(x) - log log x, error bound c / log x.
inline ConstantEstimate meissel_mertens_from_tail(const SieveTable& table, u64 x, double c = 1.0) {
  detail::require(x >= 100, "meissel_mertens_from_tail: x must be >= 100");
  detail::require(x <= table.limit(), "meissel_mertens_from_tail: x above limit");
  const double lx = std::log(static_cast<double>(x));
  return {ConstantName::MeisselMertens, reciprocal_prime_sum(table, x) - std::log(lx), "tail-limit",
          c / lx};
}

/// M = gamma + sum_p (log(1 - 1/p) + 1/p), truncated at prime_limit. Each
/// term is O(1/p^2), so the tail is below 1/prime_limit.
inline ConstantEstimate meissel_mertens_from_series(const SieveTable& table, u64 prime_limit,
                                                    double gamma = constants::euler_gamma) {
  detail::require(prime_limit >= 1000 && prime_limit <= table.limit(),
                  "meissel_mertens_from_series: prime_limit outside [1000, limit]");
  CompensatedSum s(gamma);
  for (const u64 p : table.primes()) {
    if (p > prime_limit) break;
    const double inv = 1.0 / static_cast<double>(p);
    s += std::log1p(-inv) + inv;
  }
  return {ConstantName::MeisselMertens, s.value(), "gamma-plus-prime-series",
          1.0 / static_cast<double>(prime_limit)};
}

/// sum_{n=2}^{n_max} Lambda(n) / (log(n) n^s), skipping Lambda(n) = 0.
inline double log_zeta_truncation(const SieveTable& table, double s, u64 n_max) {
  detail::require(s > 1.0, "log_zeta_truncation: s must be > 1");
  detail::require(n_max >= 2 && n_max <= table.limit(), "log_zeta_truncation: n_max outside [2, limit]");
  CompensatedSum sum;
  for (const u64 p : table.primes()) {
    if (p > n_max) break;
    const double lp = std::log(static_cast<double>(p));
    for (u64 m = p;; m *= p) {
      const double md = static_cast<double>(m);
      sum += lp / (std::log(md) * std::pow(md, s));
      if (m > n_max / p) break;
    }
  }
  return sum.value();
}

// ---------------------------------------------------------------------------
// Range checks

/// |sum_{m<=x} Lambda(m)/m - log x| <= bound for every integer x in
/// [x_lo, x_max]. Witness: lhs = |deviation|, rhs = bound.
inline VerificationOutcome check_newman_bound(const SieveTable& table, u64 x_max, double bound = 2.0,
                                              u64 x_lo = 10) {
  detail::require(x_lo >= 2 && x_lo <= x_max && x_max <= table.limit(), "check_newman_bound: bad range");
  OutcomeBuilder b("newman_bound", x_lo, x_max);
  CompensatedSum s;
  for (u64 x = 2; x <= x_max; ++x) {
    s += lambda(table, x).value / static_cast<double>(x);
    if (x >= x_lo) b.observe(x, std::fabs(s.value() - std::log(static_cast<double>(x))), bound);
  }
  return b.finish();
}

/// sum_{m<=x} Lambda(m)/m - sum_{p<=x} log p/p <= ceiling for all x in
/// [2, x_max]. The difference is the prime-power mass sum_{p^k<=x, k>=2}
/// log p / p^k, which is nonnegative and bounded by the convergent series
/// sum_p log p / (p(p-1)).
inline VerificationOutcome check_prime_power_excess(const SieveTable& table, u64 x_max,
                                                    double ceiling = 1.0) {
  detail::require(x_max >= 2 && x_max <= table.limit(), "check_prime_power_excess: bad range");
  OutcomeBuilder b("prime_power_excess", 2, x_max);
  CompensatedSum excess;
  for (u64 x = 2; x <= x_max; ++x) {
    const auto l = lambda(table, x);
    if (l.base_prime && *l.base_prime != x) excess += l.value / static_cast<double>(x);
    b.observe(x, excess.value(), ceiling);
  }
  return b.finish();
}

}  // namespace mertenslab
