#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sembed/corpus/keywords.hpp"
#include "sembed/corpus/label.hpp"
#include "sembed/corpus/xml.hpp"
#include "sembed/error.hpp"

namespace sembed {

// One recognized section: original heading, assigned label, and the raw
// body text in which table/figure cross-references are still inline XML.
struct SectionEntry {
  std::string title;
  Label label = Label::other;
  std::string raw_text;
};

namespace detail {

// Serializes paragraph content to plain text, keeping `xref` elements of
// kind table/fig verbatim so clean_text can substitute the markers; every
// other inline element is flattened to its text content.
inline void serialize_inline(const XmlNode& node, std::string& out) {
  for (const XmlNode& child : node.children) {
    if (child.is_text) {
      out += child.text;
      continue;
    }
    const std::string* kind =
        child.name == "xref" ? child.attr("ref-type") : nullptr;
    if (kind && (*kind == "table" || *kind == "fig")) {
      out += "<xref ref-type=\"" + *kind + "\">";
      out += child.flat_text();
      out += "</xref>";
    } else {
      child.append_flat_text(out);
    }
  }
}

inline void collect_sections(const XmlNode& parent,
                             const KeywordMap& keywords,
                             std::vector<SectionEntry>& out) {
  for (const XmlNode& child : parent.children) {
    if (child.is_text || child.name != "sec") continue;
    SectionEntry entry;
    if (const XmlNode* title = child.first_child("title")) {
      entry.title = trim(title->flat_text());
    }
    entry.label = keywords.match(entry.title).value_or(Label::other);
    std::string body;
    for (const XmlNode& p : child.children) {
      if (p.is_text || p.name != "p") continue;
      if (!body.empty()) body += ' ';
      serialize_inline(p, body);
    }
    entry.raw_text = std::move(body);
    out.push_back(std::move(entry));
    collect_sections(child, keywords, out);  // nested sections, depth-first
  }
}

}  // namespace detail

// Parses one JATS-style article. Returns the recognized sections, or
// nullopt when the article lacks any of the four target labels among its
// section titles (a rejection, not an error).
inline std::optional<std::vector<SectionEntry>> parse_article(
    std::string_view xml_bytes, const KeywordMap& keywords) {
  XmlNode root = XmlParser::parse(xml_bytes);
  if (root.name != "article") {
    throw StructureError("root element is <" + root.name +
                         ">, expected <article>");
  }
  const XmlNode* body = root.first_child("body");
  if (!body) throw StructureError("article has no <body> element");

  std::vector<SectionEntry> sections;
  detail::collect_sections(*body, keywords, sections);

  std::set<Label> seen;
  for (const auto& s : sections) seen.insert(s.label);
  for (Label t : target_labels()) {
    if (!seen.count(t)) return std::nullopt;
  }
  return sections;
}

}  // namespace sembed
