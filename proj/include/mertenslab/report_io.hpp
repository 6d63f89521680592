#pragma once

// CSV / JSON rendering of report rows and verification outcomes.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "report.hpp"

namespace mertenslab {

using Cell = std::variant<std::monostate, double, std::uint64_t>;

struct ReportRow {
  std::uint64_t x = 0;
  std::vector<std::pair<std::string, Cell>> columns;
};

/// Rows sharing one column set.
class ReportTable {
public:
  explicit ReportTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(ReportRow row) {
    if (row.columns.size() != columns_.size())
      throw std::invalid_argument("ReportTable: row has the wrong number of columns");
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (row.columns[i].first != columns_[i])
        throw std::invalid_argument("ReportTable: column '" + row.columns[i].first + "' out of place");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<ReportRow>& rows() const noexcept { return rows_; }

private:
  std::vector<std::string> columns_;
  std::vector<ReportRow> rows_;
};

/// 10 significant digits; what the CSV and text outputs use.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_real(std::get<double>(c));
  if (std::holds_alternative<std::uint64_t>(c)) return std::to_string(std::get<std::uint64_t>(c));
  return {};
}

inline void write_csv(std::ostream& os, const ReportTable& t) {
  os << "x";
  for (const auto& c : t.columns()) os << ',' << c;
  os << '\n';
  for (const auto& row : t.rows()) {
    os << row.x;
    for (const auto& [_, cell] : row.columns) os << ',' << format_cell(cell);
    os << '\n';
  }
}

using Json = nlohmann::ordered_json;

inline Json to_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) return std::get<double>(c);
  if (std::holds_alternative<std::uint64_t>(c)) return std::get<std::uint64_t>(c);
  return nullptr;
}

inline Json to_json(const ReportTable& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows()) {
    Json r;
    r["x"] = row.x;
    for (const auto& [name, cell] : row.columns) r[name] = to_json(cell);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Json to_json(const VerificationOutcome& o) {
  Json j;
  j["name"] = o.name;
  j["lo"] = o.lo;
  j["hi"] = o.hi;
  j["pass"] = o.pass;
  if (o.worst_witness) {
    const auto& w = *o.worst_witness;
    j["worst_witness"] = Json{{"input", w.input}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"margin", w.margin}};
  } else {
    j["worst_witness"] = nullptr;
  }
  j["first_failure"] = o.first_failure ? Json(*o.first_failure) : Json(nullptr);
  return j;
}

/// One human-readable line: status, name, range, worst witness.
inline std::string format_outcome(const VerificationOutcome& o) {
  std::string s = o.pass ? "PASS  " : "FAIL  ";
  s += o.name + "  [" + std::to_string(o.lo) + ", " + std::to_string(o.hi) + "]";
  if (o.worst_witness) {
    const auto& w = *o.worst_witness;
    s += "  worst: x=" + std::to_string(w.input) + " lhs=" + format_real(w.lhs) +
         " rhs=" + format_real(w.rhs) + " margin=" + format_real(w.margin);
  }
  if (o.first_failure) s += "  first failure at " + std::to_string(*o.first_failure);
  return s;
}

/// Residual report as an outcome: each row observes |residual| <= tolerance.
inline VerificationOutcome report_outcome(const std::string& name, const ResidualReport& r) {
  const std::uint64_t lo = r.rows.empty() ? 0 : r.rows.front().x;
  const std::uint64_t hi = r.rows.empty() ? 0 : r.rows.back().x;
  OutcomeBuilder b(name, lo, hi);
  for (const auto& row : r.rows) b.observe(row.x, std::fabs(row.residual), row.tolerance);
  return b.finish();
}

/// Outcome for strictly decreasing |residual| across power-of-ten rows.
/// Witness: lhs = |residual at x|, rhs = |residual at previous decade|.
inline VerificationOutcome decade_outcome(const std::string& name, const ResidualReport& r) {
  std::vector<const ResidualRow*> decades;
  for (const auto& row : r.rows)
    if (detail::is_power_of_ten(row.x)) decades.push_back(&row);
  OutcomeBuilder b(name, decades.empty() ? 0 : decades.front()->x, decades.empty() ? 0 : decades.back()->x);
  for (std::size_t i = 1; i < decades.size(); ++i) {
    const double cur = std::fabs(decades[i]->residual);
    const double prev = std::fabs(decades[i - 1]->residual);
    b.observe_exact(decades[i]->x, cur, prev, cur < prev);
  }
  return b.finish();
}

}  // namespace mertenslab
