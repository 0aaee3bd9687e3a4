#pragma once

#include <regex>
#include <string>
#include <string_view>

#include "sembed/util/text.hpp"

namespace sembed {

// Replaces inline table/figure cross-references with @table / @fig
// markers and normalizes whitespace. Idempotent and total.
inline std::string clean_text(std::string_view raw) {
  static const std::regex table_ref(
      R"(<xref[^>]*ref-type\s*=\s*["']table["'][^>]*(?:/>|>[\s\S]*?</xref\s*>))",
      std::regex::ECMAScript);
  static const std::regex fig_ref(
      R"(<xref[^>]*ref-type\s*=\s*["']fig["'][^>]*(?:/>|>[\s\S]*?</xref\s*>))",
      std::regex::ECMAScript);
  std::string s(raw);
  s = std::regex_replace(s, table_ref, " @table ");
  s = std::regex_replace(s, fig_ref, " @fig ");
  return collapse_whitespace(s);
}

}  // namespace sembed
