#pragma once

#include <memory>
#include <vector>

#include "keygraph/annotator.hpp"
#include "keygraph/corpus.hpp"
#include "keygraph/nn.hpp"

namespace keygraph {

// Sparse tf-idf featurizer. Vocabulary and idf come from the documents the
// classifier is trained on; tokens outside the vocabulary are dropped at
// prediction time. Feature rows are L2-normalized.
struct BowFeaturizer {
  std::unordered_map<std::string, int> vocabulary;
  std::vector<double> idf;

  static BowFeaturizer fit(const Corpus& corpus, const std::vector<int>& doc_ids);

  // (column, value) pairs sorted by column.
  std::vector<std::pair<int, double>> featurize(const Document& doc) const;

  int dim() const { return static_cast<int>(idf.size()); }
};

struct ClassifierTrainConfig {
  int epochs = 30;
  int batch_size = 128;
  OptimizerConfig optim{1e-3, 0.0, 0.9, 0.999, 1e-8};
};

struct SelfTrainConfig {
  int rounds = 3;
  double confidence_threshold = 0.9;  // in (0.5, 1]
};

// Contract for plugging in a different downstream classifier: train on the
// labeled subset, predict every document. train may warm-start from the
// current parameters when called repeatedly.
class TextClassifier {
 public:
  virtual ~TextClassifier() = default;
  virtual void train(const Corpus& corpus, const PseudoLabeling& labels) = 0;
  virtual std::vector<PseudoLabel> predict(const Corpus& corpus) const = 0;
};

// Bag-of-words linear softmax classifier. First train() fits the featurizer
// on the labeled documents and initializes weights at zero; later calls
// continue from the current parameters.
class LinearTextClassifier : public TextClassifier {
 public:
  LinearTextClassifier(int class_count, ClassifierTrainConfig config,
                       std::uint64_t seed);

  // Minimizes softmax cross-entropy over the labeled documents only.
  // Errors when the labeling covers nothing.
  void train(const Corpus& corpus, const PseudoLabeling& labels) override;

  // Every document gets a label; empty documents fall back to the bias.
  std::vector<PseudoLabel> predict(const Corpus& corpus) const override;

  // Rounds of predict -> keep confident labels -> retrain from current
  // parameters. Stops early when the kept label set repeats.
  void self_train(const Corpus& corpus, const SelfTrainConfig& config);

  const BowFeaturizer& featurizer() const { return featurizer_; }

 private:
  void train_on(const Corpus& corpus,
                const std::vector<std::pair<int, int>>& doc_labels);

  int class_count_;
  ClassifierTrainConfig config_;
  Rng rng_;
  bool fitted_ = false;
  BowFeaturizer featurizer_;
  Parameter weight_;  // C x vocabulary
  Parameter bias_;    // 1 x C
};

}  // namespace keygraph
