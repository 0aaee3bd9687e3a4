#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "sembed/corpus/label.hpp"
#include "sembed/error.hpp"
#include "sembed/util/io.hpp"
#include "sembed/util/text.hpp"

namespace sembed {

// Normalization applied to section titles and keywords before matching:
// lowercase, trim, strip trailing punctuation.
inline std::string normalize_title(std::string_view title) {
  std::string s = to_lower(trim(title));
  while (!s.empty()) {
    char c = s.back();
    if (c == '.' || c == ',' || c == ':' || c == ';' || c == '!' ||
        c == '?') {
      s.pop_back();
      while (!s.empty() && ascii_space(s.back())) s.pop_back();
    } else {
      break;
    }
  }
  return s;
}

// Maps normalized section-title keywords onto the four target labels.
// Keyword sets are pairwise disjoint and non-empty by construction.
class KeywordMap {
 public:
  static KeywordMap defaults() {
    KeywordMap m;
    m.add(Label::background, "background");
    m.add(Label::background, "introduction");
    m.add(Label::objective, "objective");
    m.add(Label::objective, "objectives");
    m.add(Label::objective, "aim");
    m.add(Label::objective, "aims");
    m.add(Label::objective, "purpose");
    m.add(Label::methods, "methods");
    m.add(Label::methods, "method");
    m.add(Label::methods, "materials and methods");
    m.add(Label::results, "results");
    m.add(Label::results, "result");
    m.add(Label::results, "findings");
    m.validate();
    return m;
  }

  // One entry per line: label<TAB>keyword.
  static KeywordMap from_bytes(const std::string& bytes) {
    KeywordMap m;
    std::istringstream in(bytes);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw ValidationError("keyword map line " + std::to_string(line_no) +
                              ": expected label<TAB>keyword");
      }
      Label label = parse_label(line.substr(0, tab));
      bool is_target = false;
      for (Label t : target_labels()) is_target |= (t == label);
      if (!is_target) {
        throw ValidationError("keyword map line " + std::to_string(line_no) +
                              ": label '" + std::string(label_name(label)) +
                              "' is not an extraction target");
      }
      m.add(label, line.substr(tab + 1), line_no);
    }
    m.validate();
    return m;
  }

  static KeywordMap load(const std::filesystem::path& path) {
    return from_bytes(read_file_bytes(path));
  }

  void add(Label label, std::string_view keyword, std::size_t line_no = 0) {
    std::string key = normalize_title(keyword);
    if (key.empty()) {
      throw ValidationError("keyword map: empty keyword" +
                            (line_no ? " at line " + std::to_string(line_no)
                                     : std::string()));
    }
    auto [it, inserted] = by_keyword_.emplace(key, label);
    if (!inserted && it->second != label) {
      throw ValidationError("keyword '" + key +
                            "' assigned to two labels: " +
                            std::string(label_name(it->second)) + " and " +
                            std::string(label_name(label)));
    }
  }

  void validate() const {
    for (Label t : target_labels()) {
      bool found = false;
      for (const auto& [k, l] : by_keyword_) found |= (l == t);
      if (!found) {
        throw ValidationError("keyword map: no keyword for target label '" +
                              std::string(label_name(t)) + "'");
      }
    }
  }

  // Matches a raw section title; unmatched titles belong to `other`.
  std::optional<Label> match(std::string_view title) const {
    auto it = by_keyword_.find(normalize_title(title));
    if (it == by_keyword_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, Label>& entries() const { return by_keyword_; }

 private:
  std::map<std::string, Label> by_keyword_;
};

}  // namespace sembed
