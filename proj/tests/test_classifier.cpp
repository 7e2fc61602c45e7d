#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "keygraph/classifier.hpp"
#include "test_util.hpp"

using namespace keygraph;
using testutil::corpus_from_token_lists;
using testutil::doc_from_tokens;

namespace {

PseudoLabeling labeling_from(const std::vector<std::optional<int>>& labels) {
  PseudoLabeling out;
  for (const auto& l : labels) {
    if (l) {
      out.per_doc.push_back(PseudoLabel{*l, 1.0});
      ++out.covered_count;
    } else {
      out.per_doc.push_back(std::nullopt);
    }
  }
  return out;
}

Corpus separable_corpus(int per_class) {
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < per_class; ++i) {
    docs.push_back({"apple", "orchard", "cider", "fruit"});
    docs.push_back({"engine", "piston", "diesel", "motor"});
  }
  return corpus_from_token_lists(std::move(docs), 2);
}

double training_accuracy(const LinearTextClassifier& clf, const Corpus& corpus,
                         const PseudoLabeling& labels) {
  const auto preds = clf.predict(corpus);
  int right = 0, total = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    if (!labels.per_doc[i]) continue;
    ++total;
    if (preds[i].label == labels.per_doc[i]->label) ++right;
  }
  return static_cast<double>(right) / total;
}

}  // namespace

TEST_CASE("a separable toy corpus trains to perfect accuracy") {
  const Corpus corpus = separable_corpus(20);
  std::vector<std::optional<int>> labels;
  for (int i = 0; i < 20; ++i) {
    labels.push_back(0);
    labels.push_back(1);
  }
  const auto labeling = labeling_from(labels);
  LinearTextClassifier clf(2, {}, 7);
  clf.train(corpus, labeling);
  CHECK(training_accuracy(clf, corpus, labeling) == 1.0);
}

TEST_CASE("a single labeled document per class is learned") {
  const auto corpus = corpus_from_token_lists(
      {{"alpha", "beta"}, {"gamma", "delta"}, {"alpha", "gamma"}}, 2);
  const auto labeling = labeling_from({0, 1, std::nullopt});
  LinearTextClassifier clf(2, {}, 3);
  clf.train(corpus, labeling);
  const auto preds = clf.predict(corpus);
  CHECK(preds[0].label == 0);
  CHECK(preds[1].label == 1);
}

TEST_CASE("training errors on an empty labeling") {
  const Corpus corpus = separable_corpus(2);
  PseudoLabeling empty;
  empty.per_doc.resize(corpus.documents.size());
  LinearTextClassifier clf(2, {}, 1);
  CHECK_THROWS_WITH_AS(clf.train(corpus, empty), doctest::Contains("empty"),
                       std::runtime_error);
}

TEST_CASE("losses are symmetric under a consistent class permutation") {
  // corpus symmetric under swapping the fruit and engine vocabularies
  std::vector<std::vector<std::string>> docs_a, docs_b;
  for (int i = 0; i < 8; ++i) {
    std::vector<std::string> fruit = {"apple", "cider"};
    std::vector<std::string> engine = {"engine", "diesel"};
    if (i % 2) {
      fruit.push_back("fruit");
      engine.push_back("motor");
    }
    docs_a.push_back(fruit);
    docs_a.push_back(engine);
    docs_b.push_back(engine);
    docs_b.push_back(fruit);
  }
  const auto corpus_a = corpus_from_token_lists(docs_a, 2);
  const auto corpus_b = corpus_from_token_lists(docs_b, 2);

  std::vector<std::optional<int>> labels_a, labels_b;
  for (int i = 0; i < 8; ++i) {
    labels_a.push_back(0);
    labels_a.push_back(1);
    labels_b.push_back(1);
    labels_b.push_back(0);
  }

  // full-batch training keeps the trajectories exactly mirrored
  ClassifierTrainConfig cfg;
  cfg.batch_size = 64;
  cfg.epochs = 15;
  LinearTextClassifier ca(2, cfg, 5), cb(2, cfg, 5);
  ca.train(corpus_a, labeling_from(labels_a));
  cb.train(corpus_b, labeling_from(labels_b));

  const auto pa = ca.predict(corpus_a);
  const auto pb = cb.predict(corpus_b);
  for (size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].label == 1 - pb[i].label);
    CHECK(pa[i].confidence == doctest::Approx(pb[i].confidence).epsilon(1e-9));
  }
}

TEST_CASE("predict is total and in range") {
  const auto corpus = corpus_from_token_lists(
      {{"apple"}, {"engine"}, {}, {"unseen", "words", "only"}}, 2);
  const auto labeling = labeling_from({0, 1, std::nullopt, std::nullopt});
  LinearTextClassifier clf(2, {}, 11);
  clf.train(corpus, labeling);
  const auto preds = clf.predict(corpus);
  REQUIRE(preds.size() == corpus.documents.size());
  for (const auto& p : preds) {
    CHECK(p.label >= 0);
    CHECK(p.label < 2);
    CHECK(p.confidence > 0.0);
    CHECK(p.confidence <= 1.0);
  }
}

TEST_CASE("empty documents fall back to the bias without error") {
  const auto corpus = corpus_from_token_lists({{"apple"}, {"engine"}, {}}, 2);
  const auto labeling = labeling_from({0, 1, std::nullopt});
  LinearTextClassifier clf(2, {}, 2);
  clf.train(corpus, labeling);
  const auto preds = clf.predict(corpus);
  CHECK(preds[2].label >= 0);
}

TEST_CASE("training never reads uncovered documents") {
  // identical covered documents, radically different uncovered ones
  const auto corpus1 = corpus_from_token_lists(
      {{"apple", "cider"}, {"engine", "diesel"}, {"zebra", "quark"}}, 2);
  const auto corpus2 = corpus_from_token_lists(
      {{"apple", "cider"}, {"engine", "diesel"}, {"totally", "different", "noise"}},
      2);
  const auto labeling = labeling_from({0, 1, std::nullopt});

  LinearTextClassifier c1(2, {}, 9), c2(2, {}, 9);
  c1.train(corpus1, labeling);
  c2.train(corpus2, labeling);

  // identical parameters mean identical behavior on any probe
  const auto probe = corpus_from_token_lists(
      {{"apple"}, {"engine"}, {"apple", "engine", "cider"}}, 2);
  const auto p1 = c1.predict(probe);
  const auto p2 = c2.predict(probe);
  for (size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].label == p2[i].label);
    CHECK(p1[i].confidence == p2[i].confidence);
  }
}

TEST_CASE("self-training with an unreachable threshold changes nothing") {
  const Corpus corpus = separable_corpus(4);
  std::vector<std::optional<int>> labels;
  for (int i = 0; i < 4; ++i) {
    labels.push_back(0);
    labels.push_back(1);
  }
  LinearTextClassifier clf(2, {}, 13);
  clf.train(corpus, labeling_from(labels));
  const auto before = clf.predict(corpus);
  SelfTrainConfig cfg;
  cfg.confidence_threshold = 1.0;
  clf.self_train(corpus, cfg);
  const auto after = clf.predict(corpus);
  for (size_t i = 0; i < before.size(); ++i) {
    CHECK(before[i].label == after[i].label);
    CHECK(before[i].confidence == after[i].confidence);
  }
}

TEST_CASE("zero self-training rounds change nothing") {
  const Corpus corpus = separable_corpus(4);
  std::vector<std::optional<int>> labels;
  for (int i = 0; i < 4; ++i) {
    labels.push_back(0);
    labels.push_back(1);
  }
  LinearTextClassifier clf(2, {}, 13);
  clf.train(corpus, labeling_from(labels));
  const auto before = clf.predict(corpus);
  SelfTrainConfig cfg;
  cfg.rounds = 0;
  clf.self_train(corpus, cfg);
  const auto after = clf.predict(corpus);
  for (size_t i = 0; i < before.size(); ++i)
    CHECK(before[i].confidence == after[i].confidence);
}

TEST_CASE("self-training rejects thresholds outside (0.5, 1]") {
  const Corpus corpus = separable_corpus(2);
  LinearTextClassifier clf(2, {}, 1);
  clf.train(corpus, labeling_from({0, 1, 0, 1}));
  SelfTrainConfig cfg;
  cfg.confidence_threshold = 0.5;
  CHECK_THROWS(clf.self_train(corpus, cfg));
  cfg.confidence_threshold = 1.2;
  CHECK_THROWS(clf.self_train(corpus, cfg));
}

TEST_CASE("self-training spreads labels to the uncovered half") {
  // separable corpus, only half of each class labeled
  std::vector<std::vector<std::string>> docs;
  std::vector<std::optional<int>> labels;
  std::vector<int> gold;
  Rng rng(3);
  for (int i = 0; i < 60; ++i) {
    const int cls = i % 2;
    std::vector<std::string> toks =
        cls == 0 ? std::vector<std::string>{"apple", "cider", "orchard"}
                 : std::vector<std::string>{"engine", "diesel", "piston"};
    // a couple of noise words so covered and uncovered docs differ
    toks.push_back("noise" + std::to_string(rng.uniform_int(6)));
    docs.push_back(toks);
    gold.push_back(cls);
    labels.push_back(i < 30 ? std::optional<int>(cls) : std::nullopt);
  }
  const auto corpus = corpus_from_token_lists(docs, 2);
  const auto labeling = labeling_from(labels);

  LinearTextClassifier clf(2, {}, 21);
  clf.train(corpus, labeling);
  auto uncovered_accuracy = [&](const LinearTextClassifier& c) {
    const auto preds = c.predict(corpus);
    int right = 0, total = 0;
    for (size_t i = 30; i < preds.size(); ++i) {
      ++total;
      if (preds[i].label == gold[i]) ++right;
    }
    return static_cast<double>(right) / total;
  };
  const double before = uncovered_accuracy(clf);
  clf.self_train(corpus, SelfTrainConfig{});
  CHECK(uncovered_accuracy(clf) >= before);
}

TEST_CASE("featurizer vocabulary comes only from the fitted documents") {
  const auto corpus = corpus_from_token_lists(
      {{"apple", "cider"}, {"engine"}, {"mystery", "tokens"}}, 2);
  const auto f = BowFeaturizer::fit(corpus, {0, 1});
  CHECK(f.vocabulary.count("apple") == 1);
  CHECK(f.vocabulary.count("mystery") == 0);
  const auto row = f.featurize(corpus.documents[2]);
  CHECK(row.empty());
}

TEST_CASE("feature rows are L2 normalized") {
  const auto corpus = corpus_from_token_lists(
      {{"apple", "cider", "apple"}, {"engine", "apple"}}, 2);
  const auto f = BowFeaturizer::fit(corpus, {0, 1});
  for (const auto& doc : corpus.documents) {
    double norm = 0.0;
    for (const auto& [col, x] : f.featurize(doc)) norm += x * x;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
}
