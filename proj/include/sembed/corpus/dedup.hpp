#pragma once

#include <set>
#include <string>
#include <unordered_map>

#include "sembed/corpus/record.hpp"
#include "sembed/util/text.hpp"

namespace sembed {

struct DedupResult {
  Corpus kept;
  Corpus removed;
};

// Removes every occurrence of any sentence text that appears under two or
// more distinct labels. Duplicate texts under the same label are kept.
// Matching is exact text equality after whitespace collapsing; case is
// significant.
inline DedupResult dedup_conflicting(const Corpus& corpus) {
  std::unordered_map<std::string, std::set<Label>> labels_by_text;
  for (const auto& s : corpus) {
    labels_by_text[collapse_whitespace(s.text)].insert(s.label);
  }
  DedupResult result;
  for (const auto& s : corpus) {
    if (labels_by_text[collapse_whitespace(s.text)].size() > 1) {
      result.removed.push_back(s);
    } else {
      result.kept.push_back(s);
    }
  }
  return result;
}

// Optional stricter pass: keeps only the first occurrence of each text,
// regardless of label. Applied after conflict removal when requested.
inline Corpus dedup_exact_texts(const Corpus& corpus) {
  std::set<std::string> seen;
  Corpus out;
  for (const auto& s : corpus) {
    if (seen.insert(collapse_whitespace(s.text)).second) out.push_back(s);
  }
  return out;
}

}  // namespace sembed
