#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace keygraph {

struct Document {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;
  std::optional<int> gold_label;  // evaluation only, never read by training
};

// Immutable after load; safe to share across readers.
struct Corpus {
  std::vector<Document> documents;
  int class_count = 0;
  std::unordered_map<std::string, int> doc_frequency;  // token -> #docs containing it

  int size() const { return static_cast<int>(documents.size()); }
};

// Lowercase maximal runs of alphanumerics, in order. ASCII letters are
// case-folded; bytes outside ASCII are kept verbatim and treated as word
// characters, so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view raw_text);

// One JSON record per line: {"id": "...", "text": "...", "label": 0}.
// label is optional. Malformed records and duplicate ids are errors that
// name the offending line.
Corpus load_corpus(const std::string& path, int class_count);
void save_corpus(const Corpus& corpus, const std::string& path);

// Build a corpus in memory (tokenizes and indexes doc frequencies).
Corpus corpus_from_documents(std::vector<Document> docs, int class_count);

}  // namespace keygraph
