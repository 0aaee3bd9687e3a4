#pragma once

#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sembed/corpus/label.hpp"
#include "sembed/error.hpp"
#include "sembed/util/io.hpp"

namespace sembed {

// One extracted sentence with its label and provenance.
struct LabeledSentence {
  std::string id;
  std::string article_id;
  Label label = Label::other;
  std::string text;
  std::string section_title;
  std::uint32_t sent_index = 0;

  bool operator==(const LabeledSentence&) const = default;
};

using Corpus = std::vector<LabeledSentence>;

// Canonical record format: one flat JSON object per line, LF endings,
// field order fixed so serialization is byte-stable.
inline std::string record_to_line(const LabeledSentence& s) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["article_id"] = s.article_id;
  j["label"] = std::string(label_name(s.label));
  j["text"] = s.text;
  j["section_title"] = s.section_title;
  j["sent_index"] = s.sent_index;
  return j.dump();
}

inline LabeledSentence record_from_line(const std::string& line,
                                        std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad corpus record at line " + std::to_string(line_no) +
                      ": " + e.what());
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) {
      throw FormatError("corpus record at line " + std::to_string(line_no) +
                        " missing field '" + key + "'");
    }
    return j.at(key);
  };
  LabeledSentence s;
  try {
    s.id = need("id").get<std::string>();
    s.article_id = need("article_id").get<std::string>();
    s.label = parse_label(need("label").get<std::string>());
    s.text = need("text").get<std::string>();
    s.section_title = need("section_title").get<std::string>();
    s.sent_index = need("sent_index").get<std::uint32_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad corpus record at line " + std::to_string(line_no) +
                      ": " + e.what());
  }
  return s;
}

inline std::string corpus_to_bytes(const Corpus& corpus) {
  std::string out;
  for (const auto& s : corpus) {
    out += record_to_line(s);
    out += '\n';
  }
  return out;
}

inline void write_corpus(const std::filesystem::path& path,
                         const Corpus& corpus) {
  atomic_write_file(path, corpus_to_bytes(corpus));
}

inline Corpus corpus_from_bytes(const std::string& bytes) {
  Corpus out;
  std::istringstream in(bytes);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    out.push_back(record_from_line(line, line_no));
  }
  return out;
}

inline Corpus read_corpus(const std::filesystem::path& path) {
  return corpus_from_bytes(read_file_bytes(path));
}

}  // namespace sembed
