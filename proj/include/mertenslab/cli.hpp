#pragma once

// Command-line front end. Exit codes: 0 all checks pass, 1 a verification
// failed, 2 usage or resource error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mertenslab.hpp"
#include "report_io.hpp"

namespace mertenslab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

enum class OutputFormat { CSV, JSON };

struct RunConfig {
  u64 limit = 0;
  u64 segment_size = kDefaultSegmentSize;
  OutputFormat output_format = OutputFormat::CSV;
  std::optional<std::filesystem::path> output_path;
  std::vector<std::string> suite_selection;
  std::map<std::string, double> tolerance_overrides;
  unsigned thread_count = 1;
  u64 memory_budget = kDefaultMemoryBudget;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "bounds", "asymptotics", "density", "all"};
  return names;
}

inline const std::vector<std::string>& table_functions() {
  static const std::vector<std::string> names{"lambda-sum", "mertens1", "recip-primes", "psi", "theta",
                                              "pi", "g-count", "density", "rough-tail", "logzeta"};
  return names;
}

/// Tunable tolerances for `verify`, overridable with --tol name=value.
/// sumpar_c and density_c are the pinned calibrations of the O(1/log x)
/// and o(1) envelopes.
inline std::map<std::string, double> default_tolerances() {
  return {
      {"sumpar_c", 0.05},      {"density_c", 3.0},   {"rough_c", 1.0},     {"tail_c", 1.0},
      {"mertens_bound", 2.0},  {"newman_bound", 2.0}, {"excess_ceiling", 1.0},
      {"psi_c1", 0.3},         {"psi_c2", 1.2},
  };
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Helpers

namespace detail {

inline std::filesystem::path resolve_cache_path(const std::filesystem::path& p) {
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("MERTENSLAB_CACHE_DIR"); dir && *dir)
    return std::filesystem::path(dir) / p;
  return p;
}

inline SieveTable make_table(const RunConfig& cfg, u64 limit) {
  return build_sieve(limit, SieveOptions{cfg.segment_size, cfg.thread_count, cfg.memory_budget});
}

// Writes `body` to cfg.output_path if set, otherwise to `out`.
inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& body) {
  if (!cfg.output_path) {
    out << body;
    return;
  }
  std::ofstream f(*cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot open output file " + cfg.output_path->string());
  f << body;
}

inline Json config_json(const RunConfig& cfg) {
  Json j;
  j["limit"] = cfg.limit;
  j["segment_size"] = cfg.segment_size;
  if (!cfg.suite_selection.empty()) j["suites"] = cfg.suite_selection;
  if (!cfg.tolerance_overrides.empty()) {
    Json t = Json::object();
    for (const auto& [k, v] : cfg.tolerance_overrides) t[k] = v;
    j["tolerances"] = t;
  }
  return j;
}

inline std::vector<u64> decades(u64 from, u64 limit) {
  std::vector<u64> xs;
  for (u64 x = from; x <= limit; x *= 10) {
    xs.push_back(x);
    if (x > limit / 10) break;
  }
  return xs;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// sieve

inline int cmd_sieve(const RunConfig& cfg, const std::optional<std::filesystem::path>& cache,
                     std::ostream& out) {
  if (cfg.limit < 2) throw UsageError("--limit must be >= 2");
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = detail::make_table(cfg, cfg.limit);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto n = table.primes().size();
  out << n << (n == 1 ? " prime" : " primes") << " <= " << cfg.limit << '\n';
  if (cache) {
    const auto path = detail::resolve_cache_path(*cache);
    write_prime_cache(path, table);
    out << "cache written to " << path.string() << '\n';
  }
  out << "sieve time " << format_real(secs) << " s (" << format_real(static_cast<double>(cfg.limit) / secs / 1e6)
      << " M/s, segment " << cfg.segment_size << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// table

inline ReportTable make_report(const SieveTable& table, const std::string& func, const std::vector<u64>& xs,
                               double s) {
  ReportTable report({"observed", "predicted", "residual"});
  const double m_ref = constants::meissel_mertens;
  for (const u64 x : xs) {
    const double xd = static_cast<double>(x);
    Cell observed;
    std::optional<double> predicted;
    if (func == "lambda-sum") {
      observed = sum_lambda_over_n(table, x);
      predicted = std::log(xd);
    } else if (func == "mertens1") {
      observed = mertens_first_sum(table, x);
      predicted = std::log(xd);
    } else if (func == "recip-primes") {
      observed = reciprocal_prime_sum(table, x);
      predicted = std::log(std::log(xd)) + m_ref;
    } else if (func == "psi") {
      observed = chebyshev_psi(table, x);
    } else if (func == "theta") {
      observed = theta_log_primorial(table, x);
    } else if (func == "pi") {
      observed = prime_count(table, x);
    } else if (func == "g-count") {
      mertenslab::detail::require(x >= 2, "g-count: x must be >= 2");
      observed = g_count(table, x);
      predicted = xd * constants::log2;
    } else if (func == "density") {
      observed = static_cast<double>(g_count(table, x)) / xd;
      predicted = constants::log2;
    } else if (func == "rough-tail") {
      observed = rough_tail_sum(table, x);
      predicted = constants::log2;
    } else if (func == "logzeta") {
      observed = log_zeta_truncation(table, s, x);
      if (s == 2.0) predicted = std::log(constants::pi_squared_over_6);
      if (s == 4.0) predicted = std::log(constants::pi_fourth_over_90);
    } else {
      throw UsageError("unknown function " + func);
    }
    Cell pred, resid;
    if (predicted) {
      pred = *predicted;
      const double obs = std::holds_alternative<double>(observed)
                             ? std::get<double>(observed)
                             : static_cast<double>(std::get<u64>(observed));
      resid = obs - *predicted;
    }
    report.add({x, {{"observed", observed}, {"predicted", pred}, {"residual", resid}}});
  }
  return report;
}

inline int cmd_table(const RunConfig& cfg, const std::string& func, const std::vector<u64>& xs, double s,
                     std::ostream& out) {
  if (xs.empty()) throw UsageError("--xs must not be empty");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i - 1] >= xs[i]) throw UsageError("--xs must be strictly increasing");
  const u64 limit = std::max<u64>({cfg.limit, xs.back(), 2});
  const auto table = detail::make_table(cfg, limit);
  const auto report = make_report(table, func, xs, s);

  std::ostringstream body;
  if (cfg.output_format == OutputFormat::CSV) {
    write_csv(body, report);
  } else {
    Json j;
    Json c = detail::config_json(cfg);
    c["limit"] = limit;
    c["function"] = func;
    if (func == "logzeta") c["s"] = s;
    j["config"] = std::move(c);
    j["rows"] = to_json(report);
    j["outcomes"] = Json::array();
    body << j.dump(2) << '\n';
  }
  detail::emit(cfg, out, body.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

inline std::vector<VerificationOutcome> run_suite(const SieveTable& table, const std::string& suite,
                                                  const std::map<std::string, double>& tol, unsigned threads) {
  const u64 L = table.limit();
  std::vector<VerificationOutcome> out;
  auto cap = [&](u64 v) { return std::min(L, v); };

  if (suite == "identities") {
    out.push_back(verify_legendre_exact(table, cap(10'000)));
    out.push_back(verify_log_factorial_float(table, cap(1'000'000)));
    out.push_back(verify_log_sum_identity_range(table, cap(100'000), threads));
    out.push_back(verify_selberg_identity_range(table, cap(10'000), threads));
    out.push_back(verify_generalized_lambda_k1(table, cap(10'000)));
    out.push_back(verify_psi_theta_gap(table, cap(1'000'000)));
  } else if (suite == "bounds") {
    out.push_back(check_binomial_bounds(std::max<u64>(L / 2, 1)));
    if (L >= 2) out.push_back(check_psi_dyadic(table, L / 2));
    out.push_back(check_psi_linear(table, L, tol.at("psi_c1"), tol.at("psi_c2")));
    out.push_back(check_primorial_bound(table, L));
    if (L >= 3) out.push_back(check_interval_primorial(table, (L - 1) / 2));
    out.push_back(check_stirling_lower(L));
    if (L >= 3) out.push_back(check_pi_upper(table, L));
    if (table.primes().size() >= 6) out.push_back(check_dusart(table, table.primes().size()));
    out.push_back(check_reciprocal_lower(table, L));
    out.push_back(check_mertens_bound(table, L, tol.at("mertens_bound")));
  } else if (suite == "asymptotics") {
    if (L >= 10) out.push_back(check_newman_bound(table, L, tol.at("newman_bound")));
    out.push_back(check_prime_power_excess(table, L, tol.at("excess_ceiling")));
    if (L >= 1000) {
      const auto xs = detail::decades(1000, L);
      const auto r = sumpar_residual_report(table, xs, constants::meissel_mertens, tol.at("sumpar_c"));
      out.push_back(report_outcome("sumpar_residual", r));
      out.push_back(decade_outcome("sumpar_decades_decreasing", r));
    }
    for (const u64 x : {u64{100}, u64{10'000}, u64{1'000'000}}) {
      if (x > L) break;
      const double direct = reciprocal_prime_sum(table, x);
      const double abel = reciprocal_prime_sum_via_abel(table, x);
      OutcomeBuilder b("abel_exactness", x, x);
      b.observe(x, std::fabs(abel - direct) / direct, 1e-12);
      out.push_back(b.finish());
    }
    if (L >= 100) {
      const u64 n = cap(1'000'000);
      const double nd = static_cast<double>(n);
      OutcomeBuilder z2("log_zeta_s2", 2, n), z4("log_zeta_s4", 2, n);
      // Tails: sum_{m>N} m^-s / k <= 1/((s-1) N^(s-1)).
      z2.observe(n, std::fabs(log_zeta_truncation(table, 2.0, n) - std::log(constants::pi_squared_over_6)),
                 1.0 / nd + 1e-12);
      z4.observe(n, std::fabs(log_zeta_truncation(table, 4.0, n) - std::log(constants::pi_fourth_over_90)),
                 1.0 / (3.0 * nd * nd * nd) + 1e-12);
      out.push_back(z2.finish());
      out.push_back(z4.finish());
    }
    if (L >= 100'000) {
      const auto series = meissel_mertens_from_series(table, L);
      const auto tail = meissel_mertens_from_tail(table, L, tol.at("tail_c"));
      OutcomeBuilder s("meissel_mertens_series", L, L), t("meissel_mertens_routes_agree", L, L);
      s.observe(L, std::fabs(series.value - constants::meissel_mertens), series.error_bound);
      t.observe(L, std::fabs(series.value - tail.value), tail.error_bound);
      out.push_back(s.finish());
      out.push_back(t.finish());
    }
  } else if (suite == "density") {
    out.push_back(verify_bijection_range(table, cap(100'000), threads));
    if (L > 100'000) out.push_back(verify_bijection_at(table, L, threads));
    out.push_back(verify_split_identity(table, cap(10'000)));
    if (L >= 3) out.push_back(verify_eta_interval(table, cap(1'000'000) - 2));
    if (L >= 10) out.push_back(verify_small_part_bound(table, L));
    if (L >= 1000) {
      const auto r = density_series(table, detail::decades(1000, L), tol.at("density_c"));
      out.push_back(report_outcome("density_log2", r));
      out.push_back(decade_outcome("density_decades_decreasing", r));
    }
    if (L >= 100) {
      const auto r = rough_tail_report(table, detail::decades(100, L), tol.at("rough_c"));
      out.push_back(report_outcome("rough_tail_log2", r));
      out.push_back(decade_outcome("rough_tail_decades_decreasing", r));
    }
  } else {
    throw UsageError("unknown suite " + suite);
  }
  return out;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.suite_selection.empty()) throw UsageError("--suite is required");
  if (cfg.limit < 2) throw UsageError("--limit must be >= 2");
  auto tol = default_tolerances();
  for (const auto& [k, v] : cfg.tolerance_overrides) {
    if (!tol.contains(k)) throw UsageError("unknown tolerance name " + k);
    tol[k] = v;
  }
  std::vector<std::string> suites;
  for (const auto& s : cfg.suite_selection) {
    if (s == "all") {
      suites = {"identities", "bounds", "asymptotics", "density"};
      break;
    }
    if (std::find(suites.begin(), suites.end(), s) == suites.end()) suites.push_back(s);
  }

  const auto table = detail::make_table(cfg, cfg.limit);
  std::vector<std::pair<std::string, VerificationOutcome>> results;
  for (const auto& s : suites)
    for (auto& o : run_suite(table, s, tol, cfg.thread_count)) results.emplace_back(s, std::move(o));

  bool all_pass = true;
  std::ostringstream body;
  if (cfg.output_format == OutputFormat::CSV) {
    for (const auto& [suite, o] : results) {
      body << suite << ": " << format_outcome(o) << '\n';
      all_pass = all_pass && o.pass;
    }
    body << (all_pass ? "all checks passed" : "verification FAILED") << '\n';
  } else {
    Json j;
    j["config"] = detail::config_json(cfg);
    j["rows"] = Json::array();
    Json outcomes = Json::array();
    for (const auto& [suite, o] : results) {
      Json oj = to_json(o);
      oj["suite"] = suite;
      outcomes.push_back(std::move(oj));
      all_pass = all_pass && o.pass;
    }
    j["outcomes"] = std::move(outcomes);
    body << j.dump(2) << '\n';
  }
  detail::emit(cfg, out, body.str());
  return all_pass ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------
// constants

inline int cmd_constants(const RunConfig& cfg, std::ostream& out) {
  if (cfg.limit < 100'000) throw UsageError("constants needs --limit >= 100000");
  const auto table = detail::make_table(cfg, cfg.limit);
  const auto series = meissel_mertens_from_series(table, cfg.limit);
  const auto tail = meissel_mertens_from_tail(table, cfg.limit);
  const double delta = std::fabs(series.value - tail.value);
  const double combined = series.error_bound + tail.error_bound;
  const bool agree = delta <= combined;

  std::ostringstream body;
  if (cfg.output_format == OutputFormat::CSV) {
    body << "name,route,value,error_bound\n";
    for (const auto* e : {&series, &tail})
      body << to_string(e->name) << ',' << e->route << ',' << format_real(e->value) << ','
           << format_real(e->error_bound) << '\n';
    body << "# reference M = " << format_real(constants::meissel_mertens) << ", series - reference = "
         << format_real(series.value - constants::meissel_mertens) << '\n';
    body << "# route delta = " << format_real(delta) << ", combined bound = " << format_real(combined)
         << (agree ? ", routes agree" : ", routes DISAGREE") << '\n';
  } else {
    Json j;
    j["config"] = detail::config_json(cfg);
    Json rows = Json::array();
    for (const auto* e : {&series, &tail})
      rows.push_back(Json{{"name", to_string(e->name)}, {"route", e->route}, {"value", e->value},
                          {"error_bound", e->error_bound}});
    j["rows"] = std::move(rows);
    OutcomeBuilder b("meissel_mertens_routes_agree", cfg.limit, cfg.limit);
    b.observe(cfg.limit, delta, combined);
    j["outcomes"] = Json::array({to_json(b.finish())});
    body << j.dump(2) << '\n';
  }
  detail::emit(cfg, out, body.str());
  return agree ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"mertenslab: prime sums, Mertens-type asymptotics and elementary bounds"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "csv";
  std::string out_path;
  u64 memory_mb = kDefaultMemoryBudget >> 20;

  auto common = [&](CLI::App* sub, bool limit_required) {
    auto* opt = sub->add_option("--limit", cfg.limit, "Sieve limit N");
    if (limit_required) opt->required();
    sub->add_option("--segment", cfg.segment_size, "Sieve segment size")->check(CLI::Range(u64{2}, kMaxSieveLimit));
    sub->add_option("--threads", cfg.thread_count, "Worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--max-memory-mb", memory_mb, "Memory budget for the sieve table");
  };
  auto formats = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "Write output to this file");
  };

  auto* sieve = app.add_subcommand("sieve", "Build the sieve and report prime count and timing");
  common(sieve, true);
  std::string cache;
  sieve->add_option("--cache", cache, "Write the prime list to this cache file");

  auto* table = app.add_subcommand("table", "Tabulate a prime sum against its predicted leading term");
  common(table, false);
  formats(table);
  std::string func;
  std::vector<u64> xs;
  double s = 2.0;
  table->add_option("--func", func, "Function name")->required()->check(CLI::IsMember(table_functions()));
  table->add_option("--xs", xs, "Comma-separated increasing sample points")->required()->delimiter(',');
  table->add_option("--s", s, "Exponent for logzeta (s > 1)");

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  common(verify, true);
  formats(verify);
  std::vector<std::string> tols;
  verify->add_option("--suite", cfg.suite_selection, "Suite name")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--tol", tols, "Tolerance override name=value");

  auto* consts = app.add_subcommand("constants", "Estimate the Meissel-Mertens constant by two routes");
  common(consts, true);
  formats(consts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  }

  try {
    cfg.output_format = format == "json" ? OutputFormat::JSON : OutputFormat::CSV;
    if (!out_path.empty()) cfg.output_path = out_path;
    cfg.memory_budget = memory_mb << 20;
    for (const auto& t : tols) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw UsageError("--tol expects name=value, got " + t);
      try {
        std::size_t used = 0;
        const std::string val = t.substr(eq + 1);
        const double v = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
        cfg.tolerance_overrides[t.substr(0, eq)] = v;
      } catch (const std::logic_error&) {
        throw UsageError("--tol value is not a number: " + t);
      }
    }

    if (*sieve) {
      std::optional<std::filesystem::path> c;
      if (!cache.empty()) c = cache;
      return cmd_sieve(cfg, c, out);
    }
    if (*table) return cmd_table(cfg, func, xs, s, out);
    if (*verify) return cmd_verify(cfg, out);
    if (*consts) return cmd_constants(cfg, out);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << " (required bytes: " << e.required_bytes() << ")\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"mertenslab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mertenslab::cli
