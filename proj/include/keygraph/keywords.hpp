#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "keygraph/corpus.hpp"

namespace keygraph {

// Per-class keyword lists. Classes are pairwise disjoint; every keyword gets
// a global vertex index assigned class-major in listing order, so the set
// doubles as the vertex table of the keyword graph built from it.
struct KeywordSet {
  struct Entry {
    int class_id;
    int vertex;
  };

  std::vector<std::vector<std::string>> classes;
  std::unordered_map<std::string, Entry> index;

  static KeywordSet from_classes(std::vector<std::vector<std::string>> classes);

  int num_classes() const { return static_cast<int>(classes.size()); }
  int vertex_count() const { return static_cast<int>(index.size()); }
  bool empty() const { return index.empty(); }

  const Entry* find(const std::string& token) const {
    auto it = index.find(token);
    return it == index.end() ? nullptr : &it->second;
  }

  // Flat sorted list of all words across classes.
  std::vector<std::string> flattened() const;

  // Throws if any class is empty (graph construction and pretraining need at
  // least one keyword per class).
  void require_nonempty_classes() const;
};

// One JSON record per line: {"class": 0, "words": ["linux", "yahoo"]}.
KeywordSet load_keywords(const std::string& path, int class_count);
void save_keywords(const KeywordSet& set, const std::string& path);

struct KeywordOccurrence {
  int position;    // token index within the document
  int keyword_id;  // global vertex index
  int class_id;
};

std::vector<KeywordOccurrence> keyword_occurrences(const Document& doc,
                                                   const KeywordSet& set);

// Number of keyword occurrences in the document (repeats counted).
int kf(const Document& doc, const KeywordSet& set);

// Number of positions in doc whose token equals w.
int term_frequency(const std::string& w, const Document& doc);

// Fraction of documents containing at least one keyword.
double coverage(const Corpus& corpus, const KeywordSet& set);

}  // namespace keygraph
