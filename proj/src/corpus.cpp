#include "keygraph/corpus.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace keygraph {

std::vector<std::string> tokenize(std::string_view raw_text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char ch : raw_text) {
    const bool word_char = std::isalnum(ch) || ch >= 0x80;
    if (word_char) {
      current.push_back(static_cast<char>(std::tolower(ch)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

static void index_doc_frequencies(Corpus& corpus) {
  corpus.doc_frequency.clear();
  std::unordered_set<std::string> seen;
  for (const auto& doc : corpus.documents) {
    seen.clear();
    for (const auto& tok : doc.tokens)
      if (seen.insert(tok).second) corpus.doc_frequency[tok] += 1;
  }
}

Corpus corpus_from_documents(std::vector<Document> docs, int class_count) {
  if (class_count <= 0)
    throw std::invalid_argument("corpus: class_count must be positive");
  Corpus corpus;
  corpus.class_count = class_count;
  corpus.documents = std::move(docs);
  std::unordered_set<std::string> ids;
  for (auto& doc : corpus.documents) {
    if (!ids.insert(doc.id).second)
      throw std::runtime_error("corpus: duplicate document id '" + doc.id + "'");
    if (doc.gold_label && (*doc.gold_label < 0 || *doc.gold_label >= class_count))
      throw std::runtime_error("corpus: document '" + doc.id +
                               "' has label outside [0, C)");
    if (doc.tokens.empty()) doc.tokens = tokenize(doc.raw_text);
  }
  index_doc_frequencies(corpus);
  return corpus;
}

Corpus load_corpus(const std::string& path, int class_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("corpus: cannot open '" + path + "'");
  std::vector<Document> docs;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("corpus: line " + std::to_string(line_no) +
                               ": invalid JSON: " + e.what());
    }
    if (!rec.contains("id") || !rec["id"].is_string())
      throw std::runtime_error("corpus: line " + std::to_string(line_no) +
                               ": missing string field 'id'");
    if (!rec.contains("text") || !rec["text"].is_string())
      throw std::runtime_error("corpus: line " + std::to_string(line_no) +
                               ": missing string field 'text'");
    Document doc;
    doc.id = rec["id"].get<std::string>();
    doc.raw_text = rec["text"].get<std::string>();
    if (rec.contains("label") && !rec["label"].is_null()) {
      if (!rec["label"].is_number_integer())
        throw std::runtime_error("corpus: line " + std::to_string(line_no) +
                                 ": 'label' must be an integer");
      doc.gold_label = rec["label"].get<int>();
    }
    doc.tokens = tokenize(doc.raw_text);
    docs.push_back(std::move(doc));
  }
  try {
    return corpus_from_documents(std::move(docs), class_count);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(e.what()) + " in '" + path + "'");
  }
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("corpus: cannot write '" + path + "'");
  for (const auto& doc : corpus.documents) {
    nlohmann::json rec;
    rec["id"] = doc.id;
    rec["text"] = doc.raw_text;
    if (doc.gold_label) rec["label"] = *doc.gold_label;
    out << rec.dump() << "\n";
  }
}

}  // namespace keygraph
