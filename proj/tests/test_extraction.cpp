#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "keygraph/extraction.hpp"
#include "keygraph/synth.hpp"
#include "test_util.hpp"

using namespace keygraph;
using testutil::corpus_from_token_lists;

namespace {

// hand-built table over abstract words
ScoreTable table_from(std::vector<std::string> words,
                      std::vector<double> idf,
                      std::vector<std::vector<double>> tf, int power) {
  ScoreTable t;
  t.words = std::move(words);
  t.idf = std::move(idf);
  t.tf = std::move(tf);
  for (size_t w = 0; w < t.words.size(); ++w) {
    std::vector<double> q;
    for (double tfv : t.tf[w]) q.push_back(word_score(tfv, t.idf[w], power));
    t.q.push_back(std::move(q));
  }
  return t;
}

std::vector<int> ranking(const ScoreTable& t, int cls) {
  std::vector<int> order(t.words.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (t.q[a][cls] != t.q[b][cls]) return t.q[a][cls] > t.q[b][cls];
    return t.words[a] < t.words[b];
  });
  return order;
}

}  // namespace

TEST_CASE("word score is exactly tf times idf to the power") {
  CHECK(word_score(std::tanh(0.1), 2.0, 4) == std::tanh(0.1) * 16.0);
  CHECK(word_score(0.0, 3.0, 4) == 0.0);
  CHECK(word_score(0.5, 1.0, 7) == 0.5);
}

TEST_CASE("a word in every document scores zero everywhere") {
  const auto corpus = corpus_from_token_lists(
      {{"common", "apple"}, {"common", "engine"}, {"common", "apple"}}, 2);
  const ScoreTable t = score_words(corpus, {0, 1, 0}, {});
  const auto it = std::find(t.words.begin(), t.words.end(), "common");
  REQUIRE(it != t.words.end());
  const size_t w = it - t.words.begin();
  CHECK(t.idf[w] == 0.0);
  CHECK(t.q[w][0] == 0.0);
  CHECK(t.q[w][1] == 0.0);
}

TEST_CASE("score components follow the tanh and log definitions") {
  const auto corpus = corpus_from_token_lists(
      {{"apple", "apple", "pie"}, {"engine", "pie"}}, 2);
  ExtractionConfig cfg;
  cfg.idf_power = 2;
  const ScoreTable t = score_words(corpus, {0, 1}, cfg);
  const auto find = [&t](const std::string& w) {
    return static_cast<size_t>(
        std::find(t.words.begin(), t.words.end(), w) - t.words.begin());
  };
  const size_t apple = find("apple");
  // tf(apple, class0) = tanh(2 / 3); idf = ln(2 / 1)
  CHECK(t.tf[apple][0] == doctest::Approx(std::tanh(2.0 / 3.0)).epsilon(1e-15));
  CHECK(t.idf[apple] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(t.q[apple][0] ==
        doctest::Approx(std::tanh(2.0 / 3.0) * std::pow(std::log(2.0), 2))
            .epsilon(1e-15));
  CHECK(t.q[apple][1] == 0.0);
}

TEST_CASE("rank ratio between fixed idfs increases strictly with the power") {
  double prev_ratio = 1.0;
  for (int m = 1; m <= 7; ++m) {
    const double qa = word_score(0.4, 3.0, m);
    const double qb = word_score(0.4, 2.0, m);
    const double ratio = qa / qb;
    CHECK(ratio == doctest::Approx(std::pow(1.5, m)).epsilon(1e-12));
    CHECK(ratio > prev_ratio);
    prev_ratio = ratio;
  }
}

TEST_CASE("raising the power never demotes the higher-idf word") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double tf_a = 0.05 + 0.9 * rng.uniform();
    const double tf_b = 0.05 + 0.9 * rng.uniform();
    const double idf_a = 1.0 + 2.0 * rng.uniform();
    const double idf_b = 1.0 + (idf_a - 1.0) * rng.uniform();  // idf_a > idf_b > 1
    bool a_ahead = false;
    for (int m = 1; m <= 8; ++m) {
      const bool now = word_score(tf_a, idf_a, m) > word_score(tf_b, idf_b, m);
      if (a_ahead) CHECK(now);
      a_ahead = a_ahead || now;
    }
  }
}

TEST_CASE("scaling one class's tf leaves its ranking unchanged") {
  Rng rng(15);
  std::vector<std::string> words;
  std::vector<double> idf;
  std::vector<std::vector<double>> tf;
  for (int w = 0; w < 30; ++w) {
    words.push_back("w" + std::to_string(w));
    idf.push_back(0.5 + 3.0 * rng.uniform());
    tf.push_back({rng.uniform(), rng.uniform()});
  }
  const auto base = table_from(words, idf, tf, 4);
  auto scaled_tf = tf;
  for (auto& row : scaled_tf) row[0] *= 0.37;
  const auto scaled = table_from(words, idf, scaled_tf, 4);
  CHECK(ranking(base, 0) == ranking(scaled, 0));
}

TEST_CASE("stopwords and short words are never candidates") {
  const auto corpus = corpus_from_token_lists(
      {{"the", "apple", "a", "of", "xy", "z"}, {"the", "engine", "of"}}, 2);
  const ScoreTable t = score_words(corpus, {0, 1}, {});
  for (const auto& w : t.words) {
    CHECK(w.size() >= 2);
    CHECK(default_stopwords().count(w) == 0);
  }
  CHECK(std::find(t.words.begin(), t.words.end(), "apple") != t.words.end());
  CHECK(std::find(t.words.begin(), t.words.end(), "xy") != t.words.end());
  CHECK(std::find(t.words.begin(), t.words.end(), "z") == t.words.end());
}

TEST_CASE("a class with no predicted documents warns and stays empty") {
  const auto corpus = corpus_from_token_lists({{"apple"}, {"engine"}}, 3);
  const ScoreTable t = score_words(corpus, {0, 1}, {});
  REQUIRE(t.warnings.size() == 1);
  CHECK(t.warnings[0].find("class 2") != std::string::npos);
  for (size_t w = 0; w < t.words.size(); ++w) CHECK(t.q[w][2] == 0.0);
}

TEST_CASE("extraction assigns each word exclusively to its argmax class") {
  auto t = table_from({"solo"}, {2.0}, {{0.9, 0.2}}, 1);
  ExtractionConfig cfg;
  cfg.top_z = 1;
  const KeywordSet set = extract_keywords(t, cfg);
  CHECK(set.classes[0] == std::vector<std::string>{"solo"});
  CHECK(set.classes[1].empty());
}

TEST_CASE("argmax ties resolve to the lowest class") {
  auto t = table_from({"even"}, {2.0}, {{0.5, 0.5}}, 1);
  ExtractionConfig cfg;
  const KeywordSet set = extract_keywords(t, cfg);
  CHECK(set.classes[0] == std::vector<std::string>{"even"});
  CHECK(set.classes[1].empty());
}

TEST_CASE("a generous top-z returns every candidate") {
  auto t = table_from({"aa", "bb", "cc"}, {2.0, 1.5, 3.0},
                      {{0.9, 0.1}, {0.2, 0.8}, {0.6, 0.5}}, 4);
  ExtractionConfig cfg;
  cfg.top_z = 100;
  const KeywordSet set = extract_keywords(t, cfg);
  CHECK(set.vertex_count() == 3);
}

TEST_CASE("extracted classes are disjoint, filtered, and score-ordered") {
  Rng rng(12);
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < 120; ++i) {
    std::vector<std::string> toks;
    const int len = 3 + static_cast<int>(rng.uniform_int(8));
    for (int j = 0; j < len; ++j)
      toks.push_back("word" + std::to_string(rng.uniform_int(40)));
    toks.push_back("the");
    docs.push_back(toks);
  }
  const auto corpus = corpus_from_token_lists(docs, 3);
  std::vector<int> preds;
  for (int i = 0; i < 120; ++i) preds.push_back(static_cast<int>(rng.uniform_int(3)));
  ExtractionConfig cfg;
  cfg.top_z = 10;
  const ScoreTable t = score_words(corpus, preds, cfg);
  const KeywordSet set = extract_keywords(t, cfg);

  std::set<std::string> seen;
  for (int c = 0; c < set.num_classes(); ++c) {
    CHECK(static_cast<int>(set.classes[c].size()) <= cfg.top_z);
    for (const auto& w : set.classes[c]) {
      CHECK(seen.insert(w).second);  // disjoint
      CHECK(w.size() >= 2);
      CHECK(default_stopwords().count(w) == 0);
    }
  }
}

TEST_CASE("keyword delta counts fresh words in the new set") {
  const auto prev = KeywordSet::from_classes({{"a", "b"}, {"c", "d"}});
  const auto next = KeywordSet::from_classes({{"a", "e"}, {"b", "f"}});
  const DeltaReport r = keyword_delta(prev, next);
  CHECK(r.delta == 0.5);
  CHECK(r.added == std::vector<std::string>{"e", "f"});
  CHECK(r.removed == std::vector<std::string>{"c", "d"});

  CHECK(keyword_delta(prev, prev).delta == 0.0);

  const auto disjoint = KeywordSet::from_classes({{"x"}, {"y"}});
  CHECK(keyword_delta(prev, disjoint).delta == 1.0);
}

TEST_CASE("keyword delta is asymmetric in set sizes") {
  const auto small = KeywordSet::from_classes({{"a"}, {"b"}});
  const auto big = KeywordSet::from_classes({{"a", "x", "y"}, {"b", "z"}});
  CHECK(keyword_delta(small, big).delta == doctest::Approx(3.0 / 5.0));
  CHECK(keyword_delta(big, small).delta == 0.0);
}

TEST_CASE("delta matches a set-arithmetic oracle and is zero iff equal") {
  Rng rng(91);
  for (int trial = 0; trial < 1000; ++trial) {
    auto draw = [&rng]() {
      std::set<std::string> words;
      const int n = 1 + static_cast<int>(rng.uniform_int(12));
      for (int i = 0; i < n; ++i)
        words.insert("w" + std::to_string(rng.uniform_int(20)));
      return words;
    };
    const auto wa = draw(), wb = draw();
    // split each flat set over two classes to exercise flattening
    auto to_set = [](const std::set<std::string>& words) {
      std::vector<std::vector<std::string>> classes(2);
      int i = 0;
      for (const auto& w : words) classes[i++ % 2].push_back(w);
      return KeywordSet::from_classes(classes);
    };
    const auto prev = to_set(wa), next = to_set(wb);
    const DeltaReport r = keyword_delta(prev, next);

    std::set<std::string> fresh;
    std::set_difference(wb.begin(), wb.end(), wa.begin(), wa.end(),
                        std::inserter(fresh, fresh.begin()));
    CHECK(r.delta ==
          doctest::Approx(static_cast<double>(fresh.size()) / wb.size())
              .epsilon(1e-15));
    // the change measure only counts additions, so a shrunken set reports 0;
    // zero implies equality exactly when the sizes match
    if (wa.size() == wb.size()) CHECK((r.delta == 0.0) == (wa == wb));
    if (std::includes(wa.begin(), wa.end(), wb.begin(), wb.end()))
      CHECK(r.delta == 0.0);
  }
}

TEST_CASE("extraction on a labeled synthetic slice surfaces its theme words") {
  SynthSpec spec;
  spec.num_documents = 800;
  spec.seed = 17;
  const SynthResult synth = generate_synthetic_corpus(spec);
  std::vector<int> gold;
  for (const auto& d : synth.corpus.documents) gold.push_back(*d.gold_label);
  ExtractionConfig cfg;
  cfg.top_z = 12;
  const KeywordSet set = extract_keywords(score_words(synth.corpus, gold, cfg), cfg);
  // the class-1 list should be dominated by class-1 context and theme words
  int class1_flavored = 0;
  for (const auto& w : set.classes[1])
    if (w.rfind("ctx1", 0) == 0 || w.rfind("theme1", 0) == 0) ++class1_flavored;
  CHECK(class1_flavored >= static_cast<int>(set.classes[1].size()) - 2);
}
