#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "keygraph/corpus.hpp"
#include "keygraph/keywords.hpp"

namespace keygraph {

struct ExtractionConfig {
  int top_z = 100;          // keywords kept per class
  int idf_power = 4;        // exponent applied to idf in the word score
  int min_word_length = 2;  // shorter words are never candidates
  bool use_stopwords = true;
};

const std::unordered_set<std::string>& default_stopwords();

// score = tf * idf^power
double word_score(double tf, double idf, int power);

// Per-candidate scores. words is sorted; tf/q are per (word, class).
struct ScoreTable {
  std::vector<std::string> words;
  std::vector<double> idf;               // per word: ln(n / doc_frequency)
  std::vector<std::vector<double>> tf;   // [word][class]: tanh(count / class token total)
  std::vector<std::vector<double>> q;    // [word][class]: tf * idf^power
  std::vector<std::string> warnings;

  int num_classes() const { return words.empty() ? 0 : static_cast<int>(tf[0].size()); }
};

// predicted_labels holds one class per document (all documents). Stopwords
// and short words are excluded before scoring; a class with no predicted
// documents gets zero scores and a warning.
ScoreTable score_words(const Corpus& corpus,
                       const std::vector<int>& predicted_labels,
                       const ExtractionConfig& config);

// Each candidate goes exclusively to its argmax-score class (ties to the
// lowest index), then every class keeps its top Z by score. Classes come
// back disjoint and possibly shorter than Z.
KeywordSet extract_keywords(const ScoreTable& scores,
                            const ExtractionConfig& config);

struct DeltaReport {
  double delta = 0.0;  // |new - new∩prev| / |new| over flattened word sets
  std::vector<std::string> added;    // in new, not in prev
  std::vector<std::string> removed;  // in prev, not in new
};

DeltaReport keyword_delta(const KeywordSet& prev, const KeywordSet& next);

}  // namespace keygraph
