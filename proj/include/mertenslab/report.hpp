#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mertenslab {

/// Minimum-slack point of a check: margin = rhs - lhs. For identity checks
/// lhs is the observed discrepancy and rhs the allowed tolerance.
struct Witness {
  std::uint64_t input = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};

struct VerificationOutcome {
  std::string name;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  bool pass = true;
  std::optional<Witness> worst_witness;
  std::optional<std::uint64_t> first_failure;  // smallest failing input
};

/// Accumulates lhs <= rhs observations. An observation fails when
/// rhs - lhs < -slack; the slack keeps rounding from manufacturing
/// counterexamples to proven inequalities.
class OutcomeBuilder {
public:
  OutcomeBuilder(std::string name, std::uint64_t lo, std::uint64_t hi, double slack = 0.0)
      : slack_(slack) {
    out_.name = std::move(name);
    out_.lo = lo;
    out_.hi = hi;
  }

  void observe(std::uint64_t input, double lhs, double rhs) {
    const double margin = rhs - lhs;
    const bool ok = !std::isnan(margin) && margin >= -slack_;
    record({input, lhs, rhs, margin}, ok);
  }

  // Exact checks: `ok` decided by the caller in integer arithmetic.
  void observe_exact(std::uint64_t input, double lhs, double rhs, bool ok) {
    record({input, lhs, rhs, rhs - lhs}, ok);
  }

  // Folds a shard's outcome in; deterministic when shards merge in order.
  void merge(const VerificationOutcome& shard) {
    if (shard.worst_witness) consider(*shard.worst_witness);
    if (!shard.pass) {
      out_.pass = false;
      if (shard.first_failure && (!out_.first_failure || *shard.first_failure < *out_.first_failure))
        out_.first_failure = shard.first_failure;
    }
  }

  VerificationOutcome finish() const { return out_; }

private:
  void record(const Witness& w, bool ok) {
    consider(w);
    if (!ok) {
      out_.pass = false;
      if (!out_.first_failure || w.input < *out_.first_failure) out_.first_failure = w.input;
    }
  }

  void consider(const Witness& w) {
    auto& cur = out_.worst_witness;
    if (!cur || w.margin < cur->margin || std::isnan(w.margin) ||
        (w.margin == cur->margin && w.input < cur->input))
      cur = w;
  }

  double slack_;
  VerificationOutcome out_;
};

enum class Law { NewmanLogX, Mertens1LogX, SumparLogLogX, DensityLog2, RoughTailLog2 };

inline std::string_view to_string(Law law) {
  switch (law) {
    case Law::NewmanLogX: return "lambda-over-n ~ log x";
    case Law::Mertens1LogX: return "log p / p ~ log x";
    case Law::SumparLogLogX: return "1/p ~ log log x + M";
    case Law::DensityLog2: return "G(x)/x ~ log 2";
    case Law::RoughTailLog2: return "sum_{sqrt n < p <= n} 1/p ~ log 2";
  }
  return "?";
}

struct ResidualRow {
  std::uint64_t x = 0;
  double observed = 0.0;
  double predicted = 0.0;
  double residual = 0.0;  // observed - predicted
  double tolerance = 0.0;
};

struct ResidualReport {
  Law law = Law::NewmanLogX;
  std::vector<ResidualRow> rows;
  bool pass = true;  // every |residual| <= tolerance
  // |residual| strictly decreasing over the rows whose x is a power of ten.
  bool decade_residuals_decreasing = true;
};

namespace detail {

inline bool is_power_of_ten(std::uint64_t x) {
  if (x < 10) return false;
  while (x % 10 == 0) x /= 10;
  return x == 1;
}

inline ResidualReport finish_report(Law law, std::vector<ResidualRow> rows) {
  ResidualReport r{law, std::move(rows), true, true};
  double prev = INFINITY;
  for (const auto& row : r.rows) {
    if (!(std::fabs(row.residual) <= row.tolerance)) r.pass = false;
    if (is_power_of_ten(row.x)) {
      const double mag = std::fabs(row.residual);
      if (!(mag < prev)) r.decade_residuals_decreasing = false;
      prev = mag;
    }
  }
  return r;
}

}  // namespace detail

enum class ConstantName { MeisselMertens, EulerGamma, Log2, PiSquaredOver6 };

inline std::string_view to_string(ConstantName c) {
  switch (c) {
    case ConstantName::MeisselMertens: return "M";
    case ConstantName::EulerGamma: return "gamma";
    case ConstantName::Log2: return "log2";
    case ConstantName::PiSquaredOver6: return "pi^2/6";
  }
  return "?";
}

struct ConstantEstimate {
  ConstantName name = ConstantName::MeisselMertens;
  double value = 0.0;
  std::string route;
  double error_bound = 0.0;
};

}  // namespace mertenslab
