#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "sembed/corpus/record.hpp"

namespace sembed {

struct LabelCount {
  Label label = Label::other;
  std::size_t count = 0;
  double percent = 0.0;
};

// Per-label counts and percentages, descending by count; ties fall back
// to canonical label order. Empty corpus yields an empty report.
inline std::vector<LabelCount> corpus_stats(const Corpus& corpus) {
  std::map<Label, std::size_t> counts;
  for (const auto& s : corpus) ++counts[s.label];
  std::vector<LabelCount> out;
  for (Label label : all_labels()) {
    auto it = counts.find(label);
    if (it == counts.end()) continue;
    LabelCount lc;
    lc.label = label;
    lc.count = it->second;
    lc.percent = 100.0 * static_cast<double>(it->second) /
                 static_cast<double>(corpus.size());
    out.push_back(lc);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.count > b.count;
  });
  return out;
}

inline std::string render_stats_tsv(const std::vector<LabelCount>& stats) {
  std::string out;
  char buf[64];
  for (const auto& lc : stats) {
    std::snprintf(buf, sizeof(buf), "%.2f", lc.percent);
    out += std::string(label_name(lc.label)) + "\t" +
           std::to_string(lc.count) + "\t" + buf + "\n";
  }
  return out;
}

}  // namespace sembed
