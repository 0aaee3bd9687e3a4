#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "sembed/error.hpp"
#include "sembed/util/text.hpp"

namespace sembed {

// Rhetorical role of a sentence within a scientific article.
enum class Label : int {
  background = 0,
  objective = 1,
  methods = 2,
  results = 3,
  conclusion = 4,
  other = 5,
};

constexpr std::size_t kLabelCount = 6;

inline const std::array<Label, kLabelCount>& all_labels() {
  static const std::array<Label, kLabelCount> a = {
      Label::background, Label::objective,  Label::methods,
      Label::results,    Label::conclusion, Label::other};
  return a;
}

// The labels an article must cover to be accepted by extraction.
inline const std::array<Label, 4>& target_labels() {
  static const std::array<Label, 4> a = {Label::background, Label::objective,
                                         Label::methods, Label::results};
  return a;
}

inline std::string_view label_name(Label l) {
  switch (l) {
    case Label::background: return "background";
    case Label::objective: return "objective";
    case Label::methods: return "methods";
    case Label::results: return "results";
    case Label::conclusion: return "conclusion";
    case Label::other: return "other";
  }
  return "other";
}

inline std::optional<Label> try_parse_label(std::string_view s) {
  std::string low = to_lower(trim(s));
  for (Label l : all_labels()) {
    if (low == label_name(l)) return l;
  }
  return std::nullopt;
}

inline Label parse_label(std::string_view s) {
  auto l = try_parse_label(s);
  if (!l) throw ValidationError("unknown label: '" + std::string(s) + "'");
  return *l;
}

}  // namespace sembed
