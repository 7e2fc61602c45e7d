#include "keygraph/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace keygraph {

const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words = {
      "a",     "about", "above",  "after",   "again",  "against", "all",
      "am",    "an",    "and",    "any",     "are",    "as",      "at",
      "be",    "because", "been", "before",  "being",  "below",   "between",
      "both",  "but",   "by",     "can",     "cannot", "could",   "did",
      "do",    "does",  "doing",  "down",    "during", "each",    "few",
      "for",   "from",  "further", "had",    "has",    "have",    "having",
      "he",    "her",   "here",   "hers",    "herself", "him",    "himself",
      "his",   "how",   "i",      "if",      "in",     "into",    "is",
      "it",    "its",   "itself", "just",    "me",     "more",    "most",
      "my",    "myself", "no",    "nor",     "not",    "now",     "of",
      "off",   "on",    "once",   "only",    "or",     "other",   "our",
      "ours",  "ourselves", "out", "over",   "own",    "same",    "she",
      "should", "so",   "some",   "such",    "than",   "that",    "the",
      "their", "theirs", "them",  "themselves", "then", "there",  "these",
      "they",  "this",  "those",  "through", "to",     "too",     "under",
      "until", "up",    "very",   "was",     "we",     "were",    "what",
      "when",  "where", "which",  "while",   "who",    "whom",    "why",
      "will",  "with",  "would",  "you",     "your",   "yours",   "yourself",
      "yourselves"};
  return words;
}

double word_score(double tf, double idf, int power) {
  return tf * std::pow(idf, power);
}

ScoreTable score_words(const Corpus& corpus,
                       const std::vector<int>& predicted_labels,
                       const ExtractionConfig& config) {
  if (predicted_labels.size() != corpus.documents.size())
    throw std::invalid_argument("score_words: predictions not aligned with corpus");
  if (corpus.size() == 0) throw std::runtime_error("score_words: empty corpus");
  const int C = corpus.class_count;

  const auto& stops = default_stopwords();
  auto is_candidate = [&](const std::string& w) {
    if (static_cast<int>(w.size()) < config.min_word_length) return false;
    if (config.use_stopwords && stops.count(w)) return false;
    return true;
  };

  // Ordered accumulation keeps the table independent of hash order.
  std::map<std::string, std::vector<long long>> class_counts;
  std::vector<long long> class_tokens(C, 0);
  for (size_t i = 0; i < corpus.documents.size(); ++i) {
    const int cls = predicted_labels[i];
    if (cls < 0 || cls >= C)
      throw std::invalid_argument("score_words: predicted label outside [0, C)");
    const auto& doc = corpus.documents[i];
    class_tokens[cls] += static_cast<long long>(doc.tokens.size());
    for (const auto& tok : doc.tokens) {
      if (!is_candidate(tok)) continue;
      auto [it, inserted] = class_counts.try_emplace(tok);
      if (inserted) it->second.assign(C, 0);
      it->second[cls] += 1;
    }
  }

  ScoreTable table;
  for (int c = 0; c < C; ++c)
    if (class_tokens[c] == 0)
      table.warnings.push_back("class " + std::to_string(c) +
                               " has no predicted documents; scores are empty");

  const double n = static_cast<double>(corpus.size());
  for (const auto& [word, counts] : class_counts) {
    const auto df_it = corpus.doc_frequency.find(word);
    const double df = static_cast<double>(df_it->second);
    const double idf = std::log(n / df);
    std::vector<double> tf(C, 0.0), q(C, 0.0);
    for (int c = 0; c < C; ++c) {
      if (class_tokens[c] == 0 || counts[c] == 0) continue;
      tf[c] = std::tanh(static_cast<double>(counts[c]) /
                        static_cast<double>(class_tokens[c]));
      q[c] = word_score(tf[c], idf, config.idf_power);
    }
    table.words.push_back(word);
    table.idf.push_back(idf);
    table.tf.push_back(std::move(tf));
    table.q.push_back(std::move(q));
  }
  return table;
}

KeywordSet extract_keywords(const ScoreTable& scores,
                            const ExtractionConfig& config) {
  if (scores.words.empty())
    throw std::runtime_error("extract_keywords: empty score table");
  if (config.top_z < 1)
    throw std::invalid_argument("extract_keywords: top_z must be >= 1");
  const int C = scores.num_classes();

  // word index -> exclusive class assignment
  std::vector<std::vector<std::pair<double, int>>> per_class(C);
  for (size_t w = 0; w < scores.words.size(); ++w) {
    int best = 0;
    for (int c = 1; c < C; ++c)
      if (scores.q[w][c] > scores.q[w][best]) best = c;
    per_class[best].emplace_back(scores.q[w][best], static_cast<int>(w));
  }

  std::vector<std::vector<std::string>> classes(C);
  for (int c = 0; c < C; ++c) {
    auto& bucket = per_class[c];
    std::sort(bucket.begin(), bucket.end(),
              [&scores](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return scores.words[a.second] < scores.words[b.second];
              });
    const size_t keep = std::min<size_t>(bucket.size(), config.top_z);
    for (size_t i = 0; i < keep; ++i)
      classes[c].push_back(scores.words[bucket[i].second]);
  }
  return KeywordSet::from_classes(std::move(classes));
}

DeltaReport keyword_delta(const KeywordSet& prev, const KeywordSet& next) {
  if (prev.empty() || next.empty())
    throw std::invalid_argument("keyword_delta: both sets must be nonempty");
  const auto prev_words = prev.flattened();
  const auto next_words = next.flattened();
  DeltaReport report;
  std::set_difference(next_words.begin(), next_words.end(), prev_words.begin(),
                      prev_words.end(), std::back_inserter(report.added));
  std::set_difference(prev_words.begin(), prev_words.end(), next_words.begin(),
                      next_words.end(), std::back_inserter(report.removed));
  report.delta = static_cast<double>(report.added.size()) /
                 static_cast<double>(next_words.size());
  return report;
}

}  // namespace keygraph
