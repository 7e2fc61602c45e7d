#include "keygraph/keywords.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace keygraph {

KeywordSet KeywordSet::from_classes(std::vector<std::vector<std::string>> classes) {
  KeywordSet set;
  set.classes = std::move(classes);
  int vertex = 0;
  for (int c = 0; c < set.num_classes(); ++c) {
    for (const auto& word : set.classes[c]) {
      auto [it, inserted] = set.index.emplace(word, Entry{c, vertex});
      if (!inserted)
        throw std::runtime_error("keywords: '" + word +
                                 "' appears in more than one list");
      ++vertex;
    }
  }
  return set;
}

std::vector<std::string> KeywordSet::flattened() const {
  std::vector<std::string> all;
  for (const auto& cls : classes) all.insert(all.end(), cls.begin(), cls.end());
  std::sort(all.begin(), all.end());
  return all;
}

void KeywordSet::require_nonempty_classes() const {
  for (int c = 0; c < num_classes(); ++c)
    if (classes[c].empty())
      throw std::runtime_error("keywords: class " + std::to_string(c) +
                               " has no keywords");
}

KeywordSet load_keywords(const std::string& path, int class_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("keywords: cannot open '" + path + "'");
  std::vector<std::vector<std::string>> classes(class_count);
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("keywords: line " + std::to_string(line_no) +
                               ": invalid JSON: " + e.what());
    }
    if (!rec.contains("class") || !rec["class"].is_number_integer())
      throw std::runtime_error("keywords: line " + std::to_string(line_no) +
                               ": missing integer field 'class'");
    const int c = rec["class"].get<int>();
    if (c < 0 || c >= class_count)
      throw std::runtime_error("keywords: line " + std::to_string(line_no) +
                               ": class " + std::to_string(c) +
                               " outside [0, " + std::to_string(class_count) + ")");
    if (!rec.contains("words") || !rec["words"].is_array())
      throw std::runtime_error("keywords: line " + std::to_string(line_no) +
                               ": missing array field 'words'");
    for (const auto& w : rec["words"]) {
      if (!w.is_string())
        throw std::runtime_error("keywords: line " + std::to_string(line_no) +
                                 ": non-string word");
      classes[c].push_back(w.get<std::string>());
    }
  }
  return KeywordSet::from_classes(std::move(classes));
}

void save_keywords(const KeywordSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("keywords: cannot write '" + path + "'");
  for (int c = 0; c < set.num_classes(); ++c) {
    nlohmann::json rec;
    rec["class"] = c;
    rec["words"] = set.classes[c];
    out << rec.dump() << "\n";
  }
}

std::vector<KeywordOccurrence> keyword_occurrences(const Document& doc,
                                                   const KeywordSet& set) {
  std::vector<KeywordOccurrence> occ;
  for (int pos = 0; pos < static_cast<int>(doc.tokens.size()); ++pos) {
    if (const auto* e = set.find(doc.tokens[pos]))
      occ.push_back({pos, e->vertex, e->class_id});
  }
  return occ;
}

int kf(const Document& doc, const KeywordSet& set) {
  int count = 0;
  for (const auto& tok : doc.tokens)
    if (set.find(tok)) ++count;
  return count;
}

int term_frequency(const std::string& w, const Document& doc) {
  int count = 0;
  for (const auto& tok : doc.tokens)
    if (tok == w) ++count;
  return count;
}

double coverage(const Corpus& corpus, const KeywordSet& set) {
  if (corpus.size() == 0) throw std::runtime_error("coverage: empty corpus");
  int covered = 0;
  for (const auto& doc : corpus.documents)
    if (kf(doc, set) > 0) ++covered;
  return static_cast<double>(covered) / corpus.size();
}

}  // namespace keygraph
