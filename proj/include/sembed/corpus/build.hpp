#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sembed/corpus/article.hpp"
#include "sembed/corpus/clean.hpp"
#include "sembed/corpus/record.hpp"
#include "sembed/corpus/sentences.hpp"
#include "sembed/error.hpp"
#include "sembed/util/io.hpp"

namespace sembed {

struct FileError {
  std::string path;
  std::string message;
};

struct BuildResult {
  Corpus sentences;
  std::size_t articles_accepted = 0;
  std::size_t articles_rejected = 0;
  std::vector<FileError> errors;
};

// Turns one parsed article into labeled sentence records. Sections that
// share a heading continue the same sent_index sequence, which keeps
// (article_id, section_title, sent_index) unique.
inline void append_article_sentences(const std::string& article_id,
                                     const std::vector<SectionEntry>& sections,
                                     Corpus& out) {
  std::map<std::string, std::uint32_t> next_index;
  std::size_t counter = 0;
  for (const auto& sec : sections) {
    std::string cleaned = clean_text(sec.raw_text);
    for (std::string& sentence : split_sentences(cleaned)) {
      LabeledSentence s;
      s.id = article_id + ":" + std::to_string(counter++);
      s.article_id = article_id;
      s.label = sec.label;
      s.text = std::move(sentence);
      s.section_title = sec.title;
      s.sent_index = next_index[sec.title]++;
      out.push_back(std::move(s));
    }
  }
}

// Runs the full extraction pipeline over a list of article files.
// Per-file failures are collected and the pipeline continues.
inline BuildResult build_corpus(
    const std::vector<std::filesystem::path>& article_paths,
    const KeywordMap& keywords) {
  BuildResult result;
  for (const auto& path : article_paths) {
    try {
      std::string bytes = read_file_bytes(path);
      auto sections = parse_article(bytes, keywords);
      if (!sections) {
        ++result.articles_rejected;
        continue;
      }
      ++result.articles_accepted;
      append_article_sentences(path.stem().string(), *sections,
                               result.sentences);
    } catch (const Error& e) {
      result.errors.push_back({path.string(), e.what()});
    }
  }
  return result;
}

}  // namespace sembed
