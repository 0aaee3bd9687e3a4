#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "sembed/util/text.hpp"

namespace sembed {

// Pluggable sentence boundary detector; the rule-based splitter below is
// the default, a model-backed splitter can be swapped in behind this.
class SentenceSplitter {
 public:
  virtual ~SentenceSplitter() = default;
  virtual std::vector<std::string> split(std::string_view text) const = 0;
};

// Splits at `.`, `!`, `?` followed by whitespace and an uppercase letter,
// a digit, or an `@` marker. Splits are suppressed after a fixed
// abbreviation set and never fire inside decimal numbers.
class RuleSplitter final : public SentenceSplitter {
 public:
  std::vector<std::string> split(std::string_view text) const override {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      if (c != '.' && c != '!' && c != '?') continue;
      if (i + 1 >= text.size() || !ascii_space(text[i + 1])) continue;
      std::size_t j = i + 1;
      while (j < text.size() && ascii_space(text[j])) ++j;
      if (j >= text.size()) continue;  // trailing whitespace only
      char next = text[j];
      bool boundary_follows = (next >= 'A' && next <= 'Z') ||
                              (next >= '0' && next <= '9') || next == '@';
      if (!boundary_follows) continue;
      if (c == '.' && ends_with_abbreviation(text.substr(0, i + 1))) continue;
      std::string sentence = trim(text.substr(start, i + 1 - start));
      if (!sentence.empty()) out.push_back(std::move(sentence));
      start = j;
    }
    std::string tail = trim(text.substr(start));
    if (!tail.empty()) out.push_back(std::move(tail));
    return out;
  }

 private:
  static bool ends_with_abbreviation(std::string_view head) {
    static const std::array<std::string_view, 10> abbreviations = {
        "e.g.", "i.e.", "et al.", "vs.",      "Fig.",
        "Tab.", "Dr.",  "No.",    "cf.",      "approx."};
    for (std::string_view a : abbreviations) {
      if (head.size() < a.size()) continue;
      if (head.substr(head.size() - a.size()) != a) continue;
      std::size_t before = head.size() - a.size();
      if (before == 0 || !ascii_alnum(head[before - 1])) return true;
    }
    return false;
  }
};

inline std::vector<std::string> split_sentences(std::string_view text) {
  static const RuleSplitter splitter;
  return splitter.split(text);
}

}  // namespace sembed
