#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmf/diagnostics/series.hpp"

namespace mmf {

// Index columns never get a ratio.
inline bool is_index_column(const std::string& c) { return c == "time" || c == "p" || c == "p_geom" || c == "dof"; }

// Least-squares slope of log10(y) against x over the last `count` rows.
inline double tail_log_slope(const std::vector<double>& x, const std::vector<double>& y, size_t count = 3) {
  if (x.size() < count || count < 2) return std::numeric_limits<double>::quiet_NaN();
  const size_t s = x.size() - count;
  double mx = 0.0, my = 0.0;
  for (size_t i = s; i < x.size(); ++i) {
    mx += x[i];
    my += std::log10(y[i]);
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = s; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (std::log10(y[i]) - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

inline constexpr double kSaturationSlope = 0.2;

// Plateau test on a convergence column: |log10 slope| over the last three p.
inline bool is_saturated(const std::vector<double>& p, const std::vector<double>& err) {
  for (double v : err)
    if (!(v > 0.0)) return false;
  const double s = tail_log_slope(p, err, 3);
  return std::isfinite(s) && std::abs(s) < kSaturationSlope;
}

// a / b with 0/0 read as 1.
inline double safe_ratio(double a, double b) {
  if (a == b) return 1.0;
  if (b == 0.0) return std::numeric_limits<double>::infinity();
  return a / b;
}

struct CompareRow {
  std::string column;
  double a = 0.0, b = 0.0, ratio = 1.0;
  bool has_saturation = false;
  bool saturated_a = false, saturated_b = false;
};

struct CompareReport {
  std::string index;  // "time" or "p"
  double at = 0.0;    // index value of the compared row
  std::vector<CompareRow> rows;

  const CompareRow& row(const std::string& c) const {
    for (const auto& r : rows)
      if (r.column == c) return r;
    throw SchemaMismatch("no column '" + c + "' in report");
  }
};

// Compares the final rows (last time or highest p) column by column. For
// convergence tables (indexed by p) each column also gets a saturation flag.
inline CompareReport compare_tables(const Table& a, const Table& b) {
  if (a.columns != b.columns) throw SchemaMismatch("tables have different columns");
  if (a.rows.empty() || b.rows.empty()) throw SchemaMismatch("empty table");
  CompareReport rep;
  const bool by_p = !a.columns.empty() && (a.columns[0] == "p" || a.columns[0] == "p_geom");
  rep.index = a.columns.empty() ? "" : a.columns[0];
  if (by_p && a.column(rep.index) != b.column(rep.index)) throw SchemaMismatch("tables cover different p values");
  rep.at = a.rows.back()[0];
  for (size_t c = 0; c < a.columns.size(); ++c) {
    const auto& name = a.columns[c];
    if (is_index_column(name)) continue;
    CompareRow r;
    r.column = name;
    r.a = a.rows.back()[c];
    r.b = b.rows.back()[c];
    r.ratio = safe_ratio(r.a, r.b);
    if (by_p) {
      r.has_saturation = true;
      const auto p = a.column(rep.index);
      r.saturated_a = is_saturated(p, a.column(name));
      r.saturated_b = is_saturated(p, b.column(name));
    }
    rep.rows.push_back(r);
  }
  return rep;
}

inline std::string report_to_csv(const CompareReport& rep) {
  std::ostringstream os;
  os << "column,a,b,ratio[a/b],saturated_a,saturated_b\n";
  for (const auto& r : rep.rows) {
    os << r.column << ',' << format_double(r.a) << ',' << format_double(r.b) << ',' << format_double(r.ratio) << ',';
    if (r.has_saturation)
      os << (r.saturated_a ? "true" : "false") << ',' << (r.saturated_b ? "true" : "false");
    else
      os << "n/a,n/a";
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json report_to_json(const CompareReport& rep) {
  nlohmann::json j;
  j["index"] = rep.index;
  j["at"] = rep.at;
  j["columns"] = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    nlohmann::json c{{"column", r.column}, {"a", r.a}, {"b", r.b}};
    c["ratio"] = std::isfinite(r.ratio) ? nlohmann::json(r.ratio) : nlohmann::json("inf");
    if (r.has_saturation) {
      c["saturated_a"] = r.saturated_a;
      c["saturated_b"] = r.saturated_b;
    }
    j["columns"].push_back(c);
  }
  return j;
}

}  // namespace mmf
