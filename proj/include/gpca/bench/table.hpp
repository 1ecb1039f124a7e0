#pragma once

// Result tables: one row per noise level, one column per objective, and a
// trailing "Average" row. CSV output is deterministic; run metadata
// (timestamps, hashes) lives only in the JSON sidecar.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpca/errors.hpp"

namespace gpca::bench {

struct ResultTable {
  std::string row_header = "noise";
  std::vector<std::string> columns;
  std::vector<std::string> row_labels;
  std::vector<std::vector<double>> cells;
  nlohmann::json metadata = nlohmann::json::object();

  void add_row(std::string label, std::vector<double> values) {
    if (values.size() != columns.size()) {
      throw DimensionError("result row has " + std::to_string(values.size()) + " cells for " +
                           std::to_string(columns.size()) + " columns");
    }
    row_labels.push_back(std::move(label));
    cells.push_back(std::move(values));
  }

  bool empty() const noexcept { return cells.empty() || columns.empty(); }

  /// Arithmetic mean of each column over all rows.
  std::vector<double> averages() const {
    std::vector<double> avg(columns.size(), 0.0);
    for (const auto& row : cells)
      for (std::size_t j = 0; j < row.size(); ++j) avg[j] += row[j];
    for (double& v : avg) v /= static_cast<double>(cells.size());
    return avg;
  }
};

namespace detail {

inline std::string format_cell(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace detail

inline std::string to_csv(const ResultTable& table) {
  if (table.empty()) throw Error("refusing to format an empty result table");
  std::ostringstream os;
  os << table.row_header;
  for (const auto& c : table.columns) os << ',' << c;
  os << '\n';
  for (std::size_t i = 0; i < table.cells.size(); ++i) {
    os << table.row_labels[i];
    for (double v : table.cells[i]) os << ',' << detail::format_cell(v);
    os << '\n';
  }
  os << "Average";
  for (double v : table.averages()) os << ',' << detail::format_cell(v);
  os << '\n';
  return os.str();
}

inline std::string sidecar_path(const std::string& csv_path) { return csv_path + ".json"; }

/// Writes `path` (CSV) and `path`.json (metadata + cells).
inline void emit_table(const ResultTable& table, const std::string& path) {
  const std::string csv = to_csv(table);
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << csv;
    if (!out) throw Error("write failed for '" + path + "'");
  }
  nlohmann::json side = table.metadata;
  side["columns"] = table.columns;
  side["rows"] = table.row_labels;
  side["cells"] = table.cells;
  side["averages"] = table.averages();
  std::ofstream out(sidecar_path(path));
  if (!out) throw Error("cannot write '" + sidecar_path(path) + "'");
  out << side.dump(2) << '\n';
}

}  // namespace gpca::bench
