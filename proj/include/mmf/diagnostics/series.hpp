#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmf/core/errors.hpp"

namespace mmf {

// Time-stamped error/conservation records. Columns are fixed per series; every
// record carries a value for each of them.
class DiagnosticsSeries {
 public:
  DiagnosticsSeries() = default;
  explicit DiagnosticsSeries(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  void add(double time, std::vector<double> values) {
    if (values.size() != columns_.size()) throw Error("diagnostics record has the wrong number of values");
    if (!std::isfinite(time)) throw Error("diagnostics time must be finite");
    if (!times_.empty() && !(time > times_.back())) throw Error("diagnostics times must be strictly increasing");
    for (double v : values)
      if (!std::isfinite(v) || v < 0.0) throw Error("diagnostics values must be finite and non-negative");
    times_.push_back(time);
    rows_.push_back(std::move(values));
  }

  int column_index(const std::string& name) const {
    for (size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i] == name) return static_cast<int>(i);
    return -1;
  }
  double final_value(const std::string& name) const { return rows_.back().at(column_index(name)); }
  std::vector<double> column(const std::string& name) const {
    const int c = column_index(name);
    std::vector<double> v;
    for (const auto& r : rows_) v.push_back(r.at(c));
    return v;
  }

  // Unit label per column, written into the CSV header; defaults to column_unit.
  void set_unit(const std::string& column, std::string unit) { units_[column] = std::move(unit); }
  std::string unit(const std::string& column) const;

  nlohmann::json metadata = nlohmann::json::object();

 private:
  std::map<std::string, std::string> units_;
  std::vector<std::string> columns_;
  std::vector<double> times_;
  std::vector<std::vector<double>> rows_;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Unit annotation appended to CSV headers.
inline std::string column_unit(const std::string& name) {
  if (name == "time") return "time[model units]";
  if (name == "p" || name == "p_geom") return name + "[order]";
  if (name == "dof") return "dof[count]";
  if (name == "mesh_error" || name == "gae") return name + "[unit radius]";
  return name + "[relative]";
}

inline std::string default_unit(const std::string& name) {
  const auto h = column_unit(name);
  return h.substr(h.find('[') + 1, h.size() - h.find('[') - 2);
}

inline std::string DiagnosticsSeries::unit(const std::string& column) const {
  const auto it = units_.find(column);
  return it == units_.end() ? default_unit(column) : it->second;
}

inline std::string strip_unit(const std::string& header) {
  const auto pos = header.find('[');
  return pos == std::string::npos ? header : header.substr(0, pos);
}

inline std::string header_unit(const std::string& header) {
  const auto a = header.find('['), b = header.rfind(']');
  return a == std::string::npos || b == std::string::npos || b < a ? "" : header.substr(a + 1, b - a - 1);
}

// Generic numeric table: header row with units, then rows of numbers.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> units;  // parallel to columns; empty entries use column_unit

  std::vector<double> column(const std::string& name) const {
    for (size_t c = 0; c < columns.size(); ++c)
      if (columns[c] == name) {
        std::vector<double> v;
        for (const auto& r : rows) v.push_back(r[c]);
        return v;
      }
    throw SchemaMismatch("no column '" + name + "'");
  }
};

inline std::string table_to_csv(const Table& t) {
  std::ostringstream os;
  for (size_t c = 0; c < t.columns.size(); ++c) {
    os << (c ? "," : "");
    if (c < t.units.size() && !t.units[c].empty())
      os << t.columns[c] << '[' << t.units[c] << ']';
    else
      os << column_unit(t.columns[c]);
  }
  os << '\n';
  for (const auto& r : t.rows) {
    for (size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_double(r[c]);
    os << '\n';
  }
  return os.str();
}

inline Table table_from_csv(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatch("empty CSV");
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    t.columns.push_back(strip_unit(cell));
    t.units.push_back(header_unit(cell));
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream rs(line);
    std::vector<double> row;
    while (std::getline(rs, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (...) {
        throw SchemaMismatch("non-numeric CSV cell '" + cell + "'");
      }
    }
    if (row.size() != t.columns.size()) throw SchemaMismatch("CSV row width does not match the header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table read_table(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  return table_from_csv(f);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

inline Table series_to_table(const DiagnosticsSeries& s) {
  Table t;
  t.columns.push_back("time");
  t.units.push_back(default_unit("time"));
  for (const auto& c : s.columns()) {
    t.columns.push_back(c);
    t.units.push_back(s.unit(c));
  }
  for (size_t i = 0; i < s.size(); ++i) {
    std::vector<double> r{s.times()[i]};
    r.insert(r.end(), s.rows()[i].begin(), s.rows()[i].end());
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline std::string series_to_csv(const DiagnosticsSeries& s) { return table_to_csv(series_to_table(s)); }

inline DiagnosticsSeries series_from_csv(std::istream& in) {
  const Table t = table_from_csv(in);
  if (t.columns.empty() || t.columns[0] != "time") throw SchemaMismatch("series CSV must start with a time column");
  DiagnosticsSeries s(std::vector<std::string>(t.columns.begin() + 1, t.columns.end()));
  for (size_t c = 1; c < t.columns.size(); ++c)
    if (!t.units[c].empty()) s.set_unit(t.columns[c], t.units[c]);
  for (const auto& r : t.rows) s.add(r[0], std::vector<double>(r.begin() + 1, r.end()));
  return s;
}

}  // namespace mmf
