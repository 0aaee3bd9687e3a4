#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sembed/error.hpp"
#include "sembed/report/eval_report.hpp"

namespace sembed {

// One fine-tuned-vs-baseline line of a comparison table.
struct ComparisonRow {
  std::string dataset;
  std::string model;
  std::string metric;
  double fine_tuned = 0.0;
  double baseline = 0.0;
  double delta_percent = 0.0;
};

inline double delta_percent(double fine_tuned, double baseline) {
  if (baseline == 0.0) {
    throw ValidationError("delta percent is undefined for a zero baseline");
  }
  return (fine_tuned - baseline) / baseline * 100.0;
}

inline ComparisonRow make_comparison_row(const std::string& dataset,
                                         const std::string& model,
                                         const std::string& metric,
                                         double fine_tuned, double baseline) {
  ComparisonRow row;
  row.dataset = dataset;
  row.model = model;
  row.metric = metric;
  row.fine_tuned = fine_tuned;
  row.baseline = baseline;
  row.delta_percent = delta_percent(fine_tuned, baseline);
  return row;
}

struct ComparisonSummary {
  double average = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for fewer than 2 rows
};

inline ComparisonSummary summarize_deltas(
    const std::vector<ComparisonRow>& rows) {
  ComparisonSummary s;
  if (rows.empty()) return s;
  for (const auto& r : rows) s.average += r.delta_percent;
  s.average /= static_cast<double>(rows.size());
  if (rows.size() < 2) return s;
  double acc = 0.0;
  for (const auto& r : rows) {
    double d = r.delta_percent - s.average;
    acc += d * d;
  }
  s.stddev = std::sqrt(acc / static_cast<double>(rows.size() - 1));
  return s;
}

inline std::string render_comparison_tsv(
    const std::vector<ComparisonRow>& rows) {
  std::string out = "dataset\tmodel\tmetric\tfine_tuned\tbaseline\tdelta_pct\n";
  for (const auto& r : rows) {
    out += r.dataset + "\t" + r.model + "\t" + r.metric + "\t" +
           format_fixed2(r.fine_tuned) + "\t" + format_fixed2(r.baseline) +
           "\t" + format_fixed2(r.delta_percent) + "\n";
  }
  ComparisonSummary s = summarize_deltas(rows);
  out += "Average\t\t\t\t\t" + format_fixed2(s.average) + "\n";
  out += "Std\t\t\t\t\t" + format_fixed2(s.stddev) + "\n";
  return out;
}

// Fixed-width rendering for terminals.
inline std::string render_comparison_table(
    const std::vector<ComparisonRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(
      {"dataset", "model", "metric", "fine_tuned", "baseline", "delta_pct"});
  for (const auto& r : rows) {
    cells.push_back({r.dataset, r.model, r.metric, format_fixed2(r.fine_tuned),
                     format_fixed2(r.baseline),
                     format_fixed2(r.delta_percent)});
  }
  ComparisonSummary s = summarize_deltas(rows);
  cells.push_back({"Average", "", "", "", "", format_fixed2(s.average)});
  cells.push_back({"Std", "", "", "", "", format_fixed2(s.stddev)});

  std::vector<std::size_t> widths(cells[0].size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      out += row[c];
      out.append(widths[c] - row[c].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

}  // namespace sembed
