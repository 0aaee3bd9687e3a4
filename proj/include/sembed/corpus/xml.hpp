#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sembed/error.hpp"
#include "sembed/util/text.hpp"

namespace sembed {

// Minimal XML document model: an element node owns attributes and an
// ordered mix of child elements and text nodes.
struct XmlNode {
  bool is_text = false;
  std::string name;  // element name; empty for text nodes
  std::string text;  // text content; empty for element nodes
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<XmlNode> children;

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  const XmlNode* first_child(std::string_view element_name) const {
    for (const auto& c : children) {
      if (!c.is_text && c.name == element_name) return &c;
    }
    return nullptr;
  }

  // Concatenated text of this node and all descendants.
  std::string flat_text() const {
    std::string out;
    append_flat_text(out);
    return out;
  }

  void append_flat_text(std::string& out) const {
    if (is_text) {
      out += text;
      return;
    }
    for (const auto& c : children) c.append_flat_text(out);
  }
};

// Recursive-descent parser for the JATS-style subset used by extraction:
// prolog, doctype, comments, processing instructions, CDATA, character
// references, and plain elements. Offsets in errors are byte positions.
class XmlParser {
 public:
  static XmlNode parse(std::string_view input) {
    XmlParser p(input);
    return p.parse_document();
  }

 private:
  explicit XmlParser(std::string_view input) : in_(input) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("XML parse error: " + msg, pos_);
  }

  bool eof() const { return pos_ >= in_.size(); }
  char cur() const { return in_[pos_]; }

  bool starts_with(std::string_view s) const {
    return in_.substr(pos_, s.size()) == s;
  }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  void skip_ws() {
    while (!eof() && ascii_space(cur())) ++pos_;
  }

  static bool name_start(char c) {
    return ascii_alnum(c) || c == '_' || c == ':';
  }
  static bool name_char(char c) {
    return ascii_alnum(c) || c == '_' || c == ':' || c == '-' || c == '.';
  }

  std::string parse_name() {
    if (eof() || !name_start(cur())) fail("expected a name");
    std::size_t b = pos_;
    while (!eof() && name_char(cur())) ++pos_;
    return std::string(in_.substr(b, pos_ - b));
  }

  void skip_until(std::string_view terminator, const std::string& what) {
    auto at = in_.find(terminator, pos_);
    if (at == std::string_view::npos) fail("unterminated " + what);
    pos_ = at + terminator.size();
  }

  void skip_doctype() {
    // <!DOCTYPE ... > with an optional [...] internal subset.
    pos_ += 2;  // past "<!"
    int depth = 0;
    while (!eof()) {
      char c = cur();
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == '>' && depth <= 0) {
        ++pos_;
        return;
      }
      ++pos_;
    }
    fail("unterminated doctype");
  }

  // True when something was skipped.
  bool skip_misc() {
    if (starts_with("<!--")) {
      pos_ += 4;
      skip_until("-->", "comment");
      return true;
    }
    if (starts_with("<?")) {
      pos_ += 2;
      skip_until("?>", "processing instruction");
      return true;
    }
    if (starts_with("<!DOCTYPE")) {
      skip_doctype();
      return true;
    }
    return false;
  }

  std::string decode_reference() {
    // pos_ is at '&'.
    std::size_t start = pos_;
    auto semi = in_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) {
      fail("unterminated character reference");
    }
    std::string_view body = in_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (body == "lt") return "<";
    if (body == "gt") return ">";
    if (body == "amp") return "&";
    if (body == "quot") return "\"";
    if (body == "apos") return "'";
    if (!body.empty() && body[0] == '#') {
      long code = 0;
      bool ok = false;
      if (body.size() > 1 && (body[1] == 'x' || body[1] == 'X')) {
        for (std::size_t i = 2; i < body.size(); ++i) {
          char c = ascii_lower(body[i]);
          int d = (c >= '0' && c <= '9')   ? c - '0'
                  : (c >= 'a' && c <= 'f') ? c - 'a' + 10
                                           : -1;
          if (d < 0) { ok = false; break; }
          code = code * 16 + d;
          ok = true;
        }
      } else {
        for (std::size_t i = 1; i < body.size(); ++i) {
          if (body[i] < '0' || body[i] > '9') { ok = false; break; }
          code = code * 10 + (body[i] - '0');
          ok = true;
        }
      }
      if (ok && code > 0 && code < 0x110000) return encode_utf8(code);
    }
    pos_ = start;
    fail("unknown entity '&" + std::string(body) + ";'");
  }

  static std::string encode_utf8(long code) {
    std::string out;
    auto c = static_cast<unsigned long>(code);
    if (c < 0x80) {
      out += static_cast<char>(c);
    } else if (c < 0x800) {
      out += static_cast<char>(0xC0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else if (c < 0x10000) {
      out += static_cast<char>(0xE0 | (c >> 12));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (c >> 18));
      out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    }
    return out;
  }

  std::string parse_attr_value() {
    if (eof() || (cur() != '"' && cur() != '\'')) {
      fail("expected a quoted attribute value");
    }
    char quote = cur();
    ++pos_;
    std::string out;
    while (!eof() && cur() != quote) {
      if (cur() == '&') {
        out += decode_reference();
      } else if (cur() == '<') {
        fail("'<' inside attribute value");
      } else {
        out += cur();
        ++pos_;
      }
    }
    if (eof()) fail("unterminated attribute value");
    ++pos_;
    return out;
  }

  XmlNode parse_element() {
    expect("<");
    XmlNode node;
    node.name = parse_name();
    while (true) {
      skip_ws();
      if (eof()) fail("unterminated start tag <" + node.name + ">");
      if (cur() == '/') {
        expect("/>");
        return node;
      }
      if (cur() == '>') {
        ++pos_;
        break;
      }
      std::string key = parse_name();
      skip_ws();
      expect("=");
      skip_ws();
      node.attrs.emplace_back(std::move(key), parse_attr_value());
    }
    parse_content(node);
    return node;
  }

  void parse_content(XmlNode& node) {
    std::string pending_text;
    auto flush_text = [&] {
      if (pending_text.empty()) return;
      XmlNode t;
      t.is_text = true;
      t.text = std::move(pending_text);
      pending_text.clear();
      node.children.push_back(std::move(t));
    };
    while (true) {
      if (eof()) fail("missing closing tag </" + node.name + ">");
      if (cur() == '<') {
        if (starts_with("</")) {
          flush_text();
          pos_ += 2;
          std::string closer = parse_name();
          if (closer != node.name) {
            fail("closing tag </" + closer + "> does not match <" +
                 node.name + ">");
          }
          skip_ws();
          expect(">");
          return;
        }
        if (starts_with("<![CDATA[")) {
          pos_ += 9;
          auto end = in_.find("]]>", pos_);
          if (end == std::string_view::npos) fail("unterminated CDATA");
          pending_text += std::string(in_.substr(pos_, end - pos_));
          pos_ = end + 3;
          continue;
        }
        if (skip_misc()) continue;
        flush_text();
        node.children.push_back(parse_element());
        continue;
      }
      if (cur() == '&') {
        pending_text += decode_reference();
        continue;
      }
      pending_text += cur();
      ++pos_;
    }
  }

  XmlNode parse_document() {
    skip_ws();
    while (!eof() && skip_misc()) skip_ws();
    if (eof() || cur() != '<') fail("expected a root element");
    XmlNode root = parse_element();
    skip_ws();
    while (!eof() && skip_misc()) skip_ws();
    if (!eof()) fail("trailing content after root element");
    return root;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace sembed
