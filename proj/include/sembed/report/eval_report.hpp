#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "sembed/error.hpp"

namespace sembed {

// Named metric values for one run. Values are stored at full precision on
// the x100 scale used by reports; rendering rounds to two decimals.
struct EvalReport {
  std::vector<std::pair<std::string, double>> metrics;

  void set(const std::string& name, double value) {
    for (auto& [k, v] : metrics) {
      if (k == name) {
        v = value;
        return;
      }
    }
    metrics.emplace_back(name, value);
  }

  std::optional<double> get(const std::string& name) const {
    for (const auto& [k, v] : metrics) {
      if (k == name) return v;
    }
    return std::nullopt;
  }

  double at(const std::string& name) const {
    auto v = get(name);
    if (!v) throw ValidationError("report has no metric '" + name + "'");
    return *v;
  }
};

inline std::string format_fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Flat key-value rendering, one metric per line.
inline std::string render_key_values(const EvalReport& report) {
  std::string out;
  for (const auto& [k, v] : report.metrics) {
    out += k + "\t" + format_fixed2(v) + "\n";
  }
  return out;
}

// Single-row table with the given columns, header first.
inline std::string render_metric_row(const EvalReport& report,
                                     const std::vector<std::string>& columns) {
  std::string header, row;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) {
      header += '\t';
      row += '\t';
    }
    header += columns[i];
    row += format_fixed2(report.at(columns[i]));
  }
  return header + "\n" + row + "\n";
}

}  // namespace sembed
