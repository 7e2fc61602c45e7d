#include "keygraph/synth.hpp"

#include <stdexcept>

#include "keygraph/rng.hpp"

namespace keygraph {

namespace {

std::string indexed(const std::string& prefix, int a, int b) {
  return prefix + std::to_string(a) + "w" + std::to_string(b);
}

}  // namespace

SynthResult generate_synthetic_corpus(const SynthSpec& spec) {
  if (spec.classes < 2)
    throw std::invalid_argument("synth: need at least 2 classes");
  if (spec.ambiguity < 0.0 || spec.ambiguity >= 1.0)
    throw std::invalid_argument("synth: ambiguity must be in [0, 1)");
  if (spec.initial_keywords_per_class < 2 ||
      spec.initial_keywords_per_class > spec.context_words_per_class)
    throw std::invalid_argument(
        "synth: initial_keywords_per_class must be in [2, context_words_per_class]");
  if (spec.num_documents < 1)
    throw std::invalid_argument("synth: num_documents must be >= 1");

  Rng rng(spec.seed);
  const int C = spec.classes;
  const std::string pivot = "pivot";

  std::vector<std::vector<std::string>> ctx(C), theme(C);
  for (int c = 0; c < C; ++c) {
    for (int w = 0; w < spec.context_words_per_class; ++w)
      ctx[c].push_back(indexed("ctx", c, w));
    for (int w = 0; w < spec.theme_words_per_class; ++w)
      theme[c].push_back(indexed("theme", c, w));
  }
  std::vector<std::string> filler;
  for (int w = 0; w < spec.shared_filler_words; ++w)
    filler.push_back("filler" + std::to_string(w) + "x");

  std::vector<std::vector<std::string>> initial(C);
  initial[0].push_back(pivot);
  for (int c = 0; c < C; ++c)
    for (int w = 0; w < spec.initial_keywords_per_class; ++w)
      initial[c].push_back(ctx[c][w]);

  SynthResult result;
  result.initial_keywords = KeywordSet::from_classes(initial);

  auto pick = [&rng](const std::vector<std::string>& pool) -> const std::string& {
    return pool[rng.uniform_int(pool.size())];
  };

  std::vector<Document> docs;
  docs.reserve(spec.num_documents);
  for (int i = 0; i < spec.num_documents; ++i) {
    const bool ambiguous = rng.uniform() < spec.ambiguity;
    std::vector<std::string> tokens;
    std::vector<long long> votes(C, 0);  // over initial keywords only
    int gold;

    if (ambiguous) {
      gold = 1 + static_cast<int>(rng.uniform_int(C - 1));
      // Two distinct initial keywords of the true class and two pivot
      // occurrences: counting resolves the tie to class 0 and gets it wrong.
      const int k = spec.initial_keywords_per_class;
      const int first = static_cast<int>(rng.uniform_int(k));
      int second = static_cast<int>(rng.uniform_int(k - 1));
      if (second >= first) ++second;
      tokens.push_back(ctx[gold][first]);
      tokens.push_back(ctx[gold][second]);
      votes[gold] += 2;
      tokens.push_back(pivot);
      tokens.push_back(pivot);
      votes[0] += 2;
      const int themes = 2;
      for (int t = 0; t < themes; ++t) tokens.push_back(pick(theme[gold]));
      ++result.ambiguous_count;
    } else {
      gold = rng.uniform() < spec.class0_prior
                 ? 0
                 : 1 + static_cast<int>(rng.uniform_int(C - 1));
      const bool pivot_doc =
          gold == 0 ? rng.uniform() < spec.pivot_in_class0
                    : rng.uniform() < spec.pivot_in_others;
      if (gold > 0 && pivot_doc) {
        // Same induced pattern as an ambiguous document (pivot plus two
        // distinct keywords of the class) but the class's own count wins, so
        // counting stays correct here.
        const int k = spec.initial_keywords_per_class;
        const int first = static_cast<int>(rng.uniform_int(k));
        int second = static_cast<int>(rng.uniform_int(k - 1));
        if (second >= first) ++second;
        tokens.push_back(ctx[gold][first]);
        tokens.push_back(ctx[gold][second]);
        const int repeats = static_cast<int>(rng.uniform_int(3));
        for (int t = 0; t < repeats; ++t)
          tokens.push_back(rng.uniform() < 0.5 ? ctx[gold][first]
                                               : ctx[gold][second]);
        votes[gold] += 2 + repeats;
        tokens.push_back(pivot);
        votes[0] += 1;
      } else {
        const int k_ctx = 2 + static_cast<int>(rng.uniform_int(3));
        for (int t = 0; t < k_ctx; ++t) {
          const auto& w = pick(ctx[gold]);
          tokens.push_back(w);
          if (result.initial_keywords.find(w)) votes[gold] += 1;
        }
        if (gold == 0 && pivot_doc) {
          const int pivot_count = 2 + static_cast<int>(rng.uniform_int(2));
          for (int p = 0; p < pivot_count; ++p) tokens.push_back(pivot);
          votes[0] += pivot_count;
        }
      }
      const int themes = 2 + static_cast<int>(rng.uniform_int(2));
      for (int t = 0; t < themes; ++t) tokens.push_back(pick(theme[gold]));
    }
    const int fillers = 3 + static_cast<int>(rng.uniform_int(3));
    for (int t = 0; t < fillers; ++t) tokens.push_back(pick(filler));

    for (size_t j = tokens.size(); j > 1; --j)
      std::swap(tokens[j - 1], tokens[rng.uniform_int(j)]);

    long long total_votes = 0;
    int counted = 0;
    for (int c = 0; c < C; ++c) {
      total_votes += votes[c];
      if (votes[c] > votes[counted]) counted = c;
    }
    if (total_votes > 0) {
      ++result.covered;
      if (counted == gold) ++result.counting_correct;
    }

    Document doc;
    doc.id = "doc-" + std::to_string(i);
    doc.gold_label = gold;
    for (size_t t = 0; t < tokens.size(); ++t) {
      if (t) doc.raw_text.push_back(' ');
      doc.raw_text += tokens[t];
    }
    docs.push_back(std::move(doc));
  }

  result.corpus = corpus_from_documents(std::move(docs), C);
  result.counting_accuracy =
      result.covered > 0
          ? static_cast<double>(result.counting_correct) / result.covered
          : 0.0;
  return result;
}

}  // namespace keygraph
