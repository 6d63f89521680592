// Runs every acceptance criterion and prints one line per criterion.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <mertenslab/cli.hpp>

using namespace mertenslab;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;

void criterion(const char* id, const char* title, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++g_failures;
  std::printf("[%s] %s %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string failure_of(const VerificationOutcome& o) {
  if (o.pass) return "";
  return o.name + " fails at " + (o.first_failure ? std::to_string(*o.first_failure) : "?") + "; ";
}

// |residual| at each row, strictly decreasing check, and envelope check.
Verdict decade_verdict(const ResidualReport& r, double c) {
  Verdict v;
  std::ostringstream d;
  double prev = INFINITY;
  bool decreasing = true, inside = true;
  for (const auto& row : r.rows) {
    const double a = std::fabs(row.residual);
    const double env = c / std::log(static_cast<double>(row.x));
    decreasing = decreasing && a < prev;
    inside = inside && a <= env;
    prev = a;
    d << fmt("|res(%g)|=%.3e ", static_cast<double>(row.x), a);
  }
  d << (decreasing ? "strictly decreasing" : "NOT strictly decreasing") << ", "
    << (inside ? "inside" : "OUTSIDE") << fmt(" %g/log x", c);
  v.pass = decreasing && inside;
  v.detail = d.str();
  return v;
}

}  // namespace

int main() {
  constexpr double kM = 0.2614972128;
  const std::vector<u64> decades{1000, 10'000, 100'000, 1'000'000, 10'000'000};

  const auto t0 = std::chrono::steady_clock::now();
  const SieveTable table = build_sieve(100'000'000);
  std::printf("sieve to 1e8: %zu primes, %.2f s\n", table.primes().size(),
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

  criterion("AC1", "g_count equals census", [&] {
    Verdict v;
    const auto range = verify_bijection_range(table, 100'000);
    v.pass = range.pass;
    std::string d = range.pass ? "every x in [2, 1e5] equal" : failure_of(range);
    for (const u64 x : {u64{1'000'000}, u64{10'000'000}}) {
      const u64 g = g_count(table, x), c = census_oracle(table, x);
      v.pass = v.pass && g == c;
      d += fmt("; G(%g)=%llu census=%llu", static_cast<double>(x), static_cast<unsigned long long>(g),
               static_cast<unsigned long long>(c));
    }
    v.detail = d;
    return v;
  });

  criterion("AC2", "log n! via Lambda", [&] {
    const auto exact = verify_legendre_exact(table, 10'000);
    const auto flt = verify_log_factorial_float(table, 1'000'000, 1e-11);
    Verdict v{exact.pass && flt.pass, ""};
    v.detail = "Legendre exact n<=1e4: " + std::string(exact.pass ? "ok" : "FAIL") +
               "; float n<=1e6 worst rel err " +
               (flt.worst_witness ? fmt("%.2e", flt.worst_witness->lhs) : std::string("?")) + " <= 1e-11";
    return v;
  });

  criterion("AC3", "Mertens first bound to 1e7", [&] {
    const auto o = check_mertens_bound(table, 10'000'000, 2.0);
    Verdict v{o.pass, failure_of(o)};
    if (o.worst_witness)
      v.detail += fmt("max |dev| %.6f at n=%llu (bound 2)", o.worst_witness->lhs,
                      static_cast<unsigned long long>(o.worst_witness->input));
    return v;
  });

  criterion("AC4", "Meissel-Mertens constant", [&] {
    const auto series = meissel_mertens_from_series(table, 10'000'000);
    const auto tail = meissel_mertens_from_tail(table, 100'000'000);
    const double e1 = std::fabs(series.value - kM);
    const double e2 = std::fabs(tail.value - series.value);
    Verdict v{e1 <= 1e-6 && e2 <= tail.error_bound, ""};
    v.detail = fmt("series(1e7)=%.12f |err|=%.2e <= 1e-6; tail(1e8)=%.9f |tail-series|=%.2e <= %.4f",
                   series.value, e1, tail.value, e2, tail.error_bound);
    return v;
  });

  criterion("AC5", "sum 1/p residual decades 1e3..1e7", [&] {
    return decade_verdict(sumpar_residual_report(table, decades, kM, 0.05), 0.05);
  });

  criterion("AC6", "G(x)/x residual decades 1e3..1e7", [&] {
    return decade_verdict(density_series(table, decades, 3.0), 3.0);
  });

  criterion("AC7", "elementary bounds", [&] {
    const std::vector<VerificationOutcome> outs{
        check_binomial_bounds(100'000),     check_psi_dyadic(table, 1'000'000),
        check_primorial_bound(table, 1'000'000), check_interval_primorial(table, 100'000),
        check_stirling_lower(1'000'000),    check_pi_upper(table, 10'000'000),
        check_dusart(table, 1'000'000),     check_reciprocal_lower(table, 1'000'000),
    };
    Verdict v;
    std::string d;
    for (const auto& o : outs) {
      v.pass = v.pass && o.pass;
      d += o.name + (o.pass ? " ok" : " FAIL") + "; ";
    }
    v.detail = d.substr(0, d.size() - 2);
    return v;
  });

  criterion("AC8", "Abel summation exactness", [&] {
    Verdict v;
    for (const u64 x : {u64{100}, u64{10'000}, u64{1'000'000}}) {
      const double direct = reciprocal_prime_sum(table, x);
      const double rel = std::fabs(reciprocal_prime_sum_via_abel(table, x) - direct) / direct;
      v.pass = v.pass && rel <= 1e-12;
      v.detail += fmt("x=%g rel %.1e; ", static_cast<double>(x), rel);
    }
    v.detail += "tol 1e-12";
    return v;
  });

  criterion("AC9", "log zeta truncation at 1e6", [&] {
    const double pi = std::numbers::pi;
    const double e2 = std::fabs(log_zeta_truncation(table, 2.0, 1'000'000) - std::log(pi * pi / 6));
    const double e4 = std::fabs(log_zeta_truncation(table, 4.0, 1'000'000) - std::log(std::pow(pi, 4) / 90));
    return Verdict{e2 <= 1e-5 && e4 <= 1e-9, fmt("s=2 |err| %.2e <= 1e-5; s=4 |err| %.2e <= 1e-9", e2, e4)};
  });

  criterion("AC10", "verify output independent of threads", [&] {
    std::string outs[2];
    int codes[2];
    const char* threads[2] = {"1", "8"};
    for (int i = 0; i < 2; ++i) {
      std::ostringstream out, err;
      codes[i] = cli::run({"verify", "--suite", "all", "--limit", "10000000", "--threads", threads[i]}, out, err);
      outs[i] = out.str();
    }
    const bool same = outs[0] == outs[1] && codes[0] == codes[1];
    return Verdict{same && !outs[0].empty(),
                   fmt("threads 1 vs 8 at limit 1e7: %zu bytes each, %s", outs[0].size(),
                       same ? "byte-identical" : "DIFFERENT")};
  });

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
