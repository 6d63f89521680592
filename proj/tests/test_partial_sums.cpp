#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <mertenslab/partial_sums.hpp>

#include "oracles.hpp"

using namespace mertenslab;

namespace {

const SieveTable& table() {
  static const SieveTable t = build_sieve(10'000'000);
  return t;
}

constexpr double kM = 0.2614972128;
const double kLog2 = std::numbers::ln2;

double inv_log(double t) { return 1.0 / std::log(t); }

}  // namespace

TEST(SumLambdaOverN, Examples) {
  EXPECT_NEAR(sum_lambda_over_n(table(), 10), 1.6946506579244689, 1e-13);
  EXPECT_NEAR(sum_lambda_over_n(table(), 10),
              0.875 * kLog2 + (4.0 / 9.0) * std::log(3.0) + std::log(5.0) / 5 + std::log(7.0) / 7, 1e-14);
  EXPECT_NEAR(sum_lambda_over_n(table(), 2), kLog2 / 2, 1e-15);
  const double v = sum_lambda_over_n(table(), 1'000'000);
  EXPECT_LE(std::fabs(v - std::log(1e6)), 2.0);
  EXPECT_THROW(sum_lambda_over_n(table(), 1), DomainError);
}

TEST(SumLambdaOverN, DeviationTendsToMinusGamma) {
  // sum_{n<=x} Lambda(n)/n - log x -> -gamma; at 10^7 it is within 0.01.
  EXPECT_NEAR(sum_lambda_over_n(table(), 10'000'000) - std::log(1e7), -constants::euler_gamma, 0.01);
}

TEST(MertensFirstSum, Examples) {
  EXPECT_NEAR(mertens_first_sum(table(), 10), 1.312652433140255, 1e-13);
  EXPECT_NEAR(mertens_first_sum(table(), 2), kLog2 / 2, 1e-15);
  EXPECT_LE(std::fabs(mertens_first_sum(table(), 1'000'000) - std::log(1e6)), 2.0);
}

TEST(ReciprocalPrimeSum, Examples) {
  EXPECT_NEAR(reciprocal_prime_sum(table(), 10), 1.1761904761904762, 1e-15);
  EXPECT_EQ(reciprocal_prime_sum(table(), 2), 0.5);
  const double r = reciprocal_prime_sum(table(), 10) - std::log(std::log(10.0));
  EXPECT_NEAR(r, 0.34215803094252039, 1e-13);
  EXPECT_LT(std::fabs(r - kM), 1.0 / std::log(10.0));
}

TEST(PrimeSums, MatchTrialDivisionOracle) {
  const auto primes = oracle::primes_up_to(5000);
  double s = 0.0, a = 0.0;
  std::size_t i = 0;
  for (u64 x = 2; x <= 5000; ++x) {
    for (; i < primes.size() && primes[i] <= x; ++i) {
      s += 1.0 / primes[i];
      a += std::log(static_cast<double>(primes[i])) / primes[i];
    }
    ASSERT_NEAR(reciprocal_prime_sum(table(), x), s, 1e-13);
    ASSERT_NEAR(mertens_first_sum(table(), x), a, 1e-12);
  }
}

TEST(SampledSeries, EqualsPointEvaluationsAndIsMonotone) {
  const std::vector<u64> xs{2, 3, 10, 97, 1000, 65'536, 1'000'000};
  for (const auto kind : {SeriesKind::ReciprocalPrimes, SeriesKind::LogPOverP, SeriesKind::LambdaOverN}) {
    const auto s = sample_prime_sum(table(), kind, xs);
    ASSERT_EQ(s.samples.size(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const u64 x = xs[i];
      const double point = kind == SeriesKind::ReciprocalPrimes ? reciprocal_prime_sum(table(), x)
                           : kind == SeriesKind::LogPOverP      ? mertens_first_sum(table(), x)
                                                                : sum_lambda_over_n(table(), x);
      EXPECT_EQ(s.samples[i].second, point);
      if (i) {
        EXPECT_GE(s.samples[i].second, s.samples[i - 1].second);
      }
    }
  }
  const std::vector<u64> bad{10, 10};
  EXPECT_THROW(sample_prime_sum(table(), SeriesKind::ReciprocalPrimes, bad), DomainError);
}

TEST(AbelSummation, SingleStepTelescopes) {
  const std::vector<AbelWeight> w{{2, 1.0}};
  EXPECT_NEAR(abel_summation(w, inv_log, 2.0, 4.0), 1.0 / kLog2, 1e-15);
}

TEST(AbelSummation, EmptyWeightsGiveZero) {
  const std::vector<AbelWeight> w;
  EXPECT_EQ(abel_summation(w, inv_log, 2.0, 100.0), 0.0);
}

TEST(AbelSummation, RejectsBadArguments) {
  const std::vector<AbelWeight> unsorted{{5, 1.0}, {3, 1.0}};
  EXPECT_THROW(abel_summation(unsorted, inv_log, 2.0, 10.0), DomainError);
  const std::vector<AbelWeight> w{{3, 1.0}};
  EXPECT_THROW(abel_summation(w, inv_log, 10.0, 10.0), DomainError);
  EXPECT_THROW(abel_summation(w, inv_log, 11.0, 10.0), DomainError);
}

TEST(AbelSummation, RebuildsReciprocalPrimeSum) {
  for (const u64 x : {u64{2}, u64{3}, u64{100}, u64{10'000}, u64{1'000'000}}) {
    const double direct = reciprocal_prime_sum(table(), x);
    EXPECT_NEAR(reciprocal_prime_sum_via_abel(table(), x), direct, 1e-12 * direct) << x;
  }
}

TEST(AbelSummation, RandomWeightsProperty) {
  // Sum a_i f(i) over indices in [lower, upper], with indices below lower
  // contributing at f(lower).
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<AbelWeight> w;
    u64 idx = 2 + rng() % 3;
    const int n = static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) {
      w.push_back({idx, coef(rng)});
      idx += rng() % 4;  // repeated indices allowed
    }
    const double lower = 2.0 + static_cast<double>(rng() % 5);
    const double upper = lower + 1.0 + static_cast<double>(rng() % 200);
    double direct = 0.0, scale = 0.0;
    for (const auto& [i, a] : w) {
      const double t = static_cast<double>(i);
      if (t > upper) continue;
      direct += a * inv_log(std::max(t, lower));
      scale += std::fabs(a * inv_log(std::max(t, lower)));
    }
    ASSERT_NEAR(abel_summation(w, inv_log, lower, upper), direct, 1e-12 * std::max(scale, 1.0)) << trial;
  }
}

TEST(AbelSummation, QuadratureCrossCheck) {
  const auto w = log_p_over_p_weights(table(), 1000);
  const auto f_prime = [](double t) {
    const double l = std::log(t);
    return -1.0 / (t * l * l);
  };
  const double exact = abel_summation(w, inv_log, 2.0, 1000.0);
  const double quad = abel_summation_quadrature(w, inv_log, f_prime, 2.0, 1000.0, 256);
  EXPECT_NEAR(quad, exact, 1e-10);
  EXPECT_NEAR(exact, reciprocal_prime_sum(table(), 1000), 1e-13);
}

TEST(SumparReport, DecadesPassWithUnitConstant) {
  const std::vector<u64> xs{1000, 10'000, 100'000, 1'000'000, 10'000'000};
  const auto r = sumpar_residual_report(table(), xs, kM, 1.0);
  EXPECT_EQ(r.law, Law::SumparLogLogX);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.decade_residuals_decreasing);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.residual, row.observed - row.predicted);
    EXPECT_NEAR(row.tolerance, 1.0 / std::log(static_cast<double>(row.x)), 1e-15);
  }
}

TEST(SumparReport, SmallestInput) {
  const std::vector<u64> xs{3};
  const auto r = sumpar_residual_report(table(), xs, kM);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_NEAR(r.rows[0].observed, 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.rows[0].residual, 5.0 / 6.0 - std::log(std::log(3.0)) - kM, 1e-15);
  EXPECT_NEAR(r.rows[0].residual, 0.4777877, 1e-6);
  EXPECT_TRUE(r.pass);
}

TEST(SumparReport, RejectsDegenerateInput) {
  const std::vector<u64> dup{10, 10}, empty{}, small{2};
  EXPECT_THROW(sumpar_residual_report(table(), dup, kM), DomainError);
  EXPECT_THROW(sumpar_residual_report(table(), empty, kM), DomainError);
  EXPECT_THROW(sumpar_residual_report(table(), small, kM), DomainError);
}

TEST(MeisselMertens, TailRoute) {
  const auto e = meissel_mertens_from_tail(table(), 1'000'000);
  EXPECT_EQ(e.route, "tail-limit");
  EXPECT_NEAR(e.error_bound, 1.0 / std::log(1e6), 1e-15);
  EXPECT_LE(std::fabs(e.value - kM), e.error_bound);
  EXPECT_THROW(meissel_mertens_from_tail(table(), 50), DomainError);
}

TEST(MeisselMertens, SeriesRouteTermsAndValue) {
  // First term closed form.
  EXPECT_NEAR(std::log1p(-0.5) + 0.5, -0.19314718055994531, 1e-15);

  // gamma = 0 leaves the bare prime series; compare with a naive sum.
  double naive = 0.0;
  for (const u64 p : oracle::primes_up_to(1000)) naive += std::log(1.0 - 1.0 / p) + 1.0 / p;
  EXPECT_NEAR(meissel_mertens_from_series(table(), 1000, 0.0).value, naive, 1e-13);

  const auto e = meissel_mertens_from_series(table(), 10'000'000);
  EXPECT_EQ(e.route, "gamma-plus-prime-series");
  EXPECT_EQ(e.error_bound, 1e-7);
  EXPECT_NEAR(e.value, kM, 1e-7);
  EXPECT_THROW(meissel_mertens_from_series(table(), 999), DomainError);
}

TEST(MeisselMertens, RoutesAgree) {
  const auto series = meissel_mertens_from_series(table(), 10'000'000);
  const auto tail = meissel_mertens_from_tail(table(), 10'000'000);
  EXPECT_LE(std::fabs(series.value - tail.value), tail.error_bound);
}

TEST(LogZeta, Examples) {
  EXPECT_NEAR(log_zeta_truncation(table(), 2.0, 2), 0.25, 1e-16);
  EXPECT_NEAR(log_zeta_truncation(table(), 2.0, 1'000'000), std::log(std::numbers::pi * std::numbers::pi / 6),
              1e-5);
  EXPECT_NEAR(log_zeta_truncation(table(), 4.0, 10'000), std::log(std::pow(std::numbers::pi, 4) / 90), 1e-9);
  EXPECT_NEAR(std::log(std::pow(std::numbers::pi, 4) / 90), 0.0791098730673356, 1e-15);
  EXPECT_THROW(log_zeta_truncation(table(), 1.0, 100), DomainError);
}

TEST(LogZeta, PrimePowerTermsAreOneOverK) {
  // Terms for 2, 4, 8 at s = 1.5: 2^-1.5 + 4^-1.5 / 2 + 8^-1.5 / 3.
  EXPECT_NEAR(log_zeta_truncation(table(), 1.5, 8) -
                  (std::pow(2, -1.5) + std::pow(4, -1.5) / 2 + std::pow(8, -1.5) / 3 + std::pow(3, -1.5) +
                   std::pow(5, -1.5) + std::pow(7, -1.5)),
              0.0, 1e-15);
}

TEST(RangeChecks, NewmanBoundAndPrimePowerExcess) {
  EXPECT_TRUE(check_newman_bound(table(), 1'000'000).pass);
  const auto excess = check_prime_power_excess(table(), 1'000'000);
  EXPECT_TRUE(excess.pass);
  for (const u64 x : {u64{2}, u64{10}, u64{1000}, u64{123'457}, u64{1'000'000}}) {
    const double d = sum_lambda_over_n(table(), x) - mertens_first_sum(table(), x);
    EXPECT_GE(d, -1e-15) << x;
    EXPECT_LE(d, 1.0) << x;
  }
}

TEST(LogXReports, NewmanAndMertens1) {
  const std::vector<u64> xs{10, 100, 1000, 10'000, 100'000};
  EXPECT_TRUE(log_x_residual_report(table(), Law::NewmanLogX, xs).pass);
  EXPECT_TRUE(log_x_residual_report(table(), Law::Mertens1LogX, xs).pass);
  EXPECT_THROW(log_x_residual_report(table(), Law::DensityLog2, xs), DomainError);
}
