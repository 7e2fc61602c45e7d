#include "keygraph/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace keygraph {

BowFeaturizer BowFeaturizer::fit(const Corpus& corpus,
                                 const std::vector<int>& doc_ids) {
  if (doc_ids.empty())
    throw std::invalid_argument("BowFeaturizer: no documents to fit on");
  // Ordered map so column ids do not depend on hash iteration order.
  std::map<std::string, int> df;
  for (int id : doc_ids) {
    const auto& doc = corpus.documents[id];
    std::vector<std::string> uniq = doc.tokens;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (const auto& tok : uniq) df[tok] += 1;
  }
  BowFeaturizer f;
  const double n = static_cast<double>(doc_ids.size());
  for (const auto& [tok, count] : df) {
    f.vocabulary.emplace(tok, static_cast<int>(f.idf.size()));
    f.idf.push_back(std::log((1.0 + n) / (1.0 + count)) + 1.0);
  }
  return f;
}

std::vector<std::pair<int, double>> BowFeaturizer::featurize(
    const Document& doc) const {
  std::map<int, double> counts;
  for (const auto& tok : doc.tokens) {
    auto it = vocabulary.find(tok);
    if (it != vocabulary.end()) counts[it->second] += 1.0;
  }
  std::vector<std::pair<int, double>> row;
  double norm_sq = 0.0;
  for (const auto& [col, count] : counts) {
    const double x = count * idf[col];
    row.emplace_back(col, x);
    norm_sq += x * x;
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [col, x] : row) x *= inv;
  }
  return row;
}

LinearTextClassifier::LinearTextClassifier(int class_count,
                                           ClassifierTrainConfig config,
                                           std::uint64_t seed)
    : class_count_(class_count), config_(config), rng_(seed) {
  if (class_count < 1)
    throw std::invalid_argument("LinearTextClassifier: class_count must be >= 1");
}

void LinearTextClassifier::train(const Corpus& corpus,
                                 const PseudoLabeling& labels) {
  if (labels.per_doc.size() != corpus.documents.size())
    throw std::invalid_argument("train: labeling not aligned with corpus");
  std::vector<std::pair<int, int>> doc_labels;
  for (size_t i = 0; i < labels.per_doc.size(); ++i)
    if (labels.per_doc[i])
      doc_labels.emplace_back(static_cast<int>(i), labels.per_doc[i]->label);
  if (doc_labels.empty()) throw std::runtime_error("train: empty labeling");

  if (!fitted_) {
    std::vector<int> ids;
    ids.reserve(doc_labels.size());
    for (const auto& [id, label] : doc_labels) ids.push_back(id);
    featurizer_ = BowFeaturizer::fit(corpus, ids);
    weight_ = Parameter(Tensor(class_count_, featurizer_.dim()));
    bias_ = Parameter(Tensor(1, class_count_));
    fitted_ = true;
  }
  train_on(corpus, doc_labels);
}

void LinearTextClassifier::train_on(
    const Corpus& corpus, const std::vector<std::pair<int, int>>& doc_labels) {
  std::vector<std::vector<std::pair<int, double>>> rows(doc_labels.size());
  for (size_t i = 0; i < doc_labels.size(); ++i)
    rows[i] = featurizer_.featurize(corpus.documents[doc_labels[i].first]);

  std::vector<Parameter*> ps = {&weight_, &bias_};
  std::vector<int> order(doc_labels.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::vector<double> logits(class_count_);

  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng_.uniform_int(i)]);
    for (size_t begin = 0; begin < order.size();
         begin += static_cast<size_t>(config_.batch_size)) {
      const size_t end =
          std::min(begin + static_cast<size_t>(config_.batch_size), order.size());
      zero_grads(ps);
      const double inv = 1.0 / static_cast<double>(end - begin);
      for (size_t i = begin; i < end; ++i) {
        const auto& [doc_id, label] = doc_labels[order[i]];
        const auto& row = rows[order[i]];
        for (int c = 0; c < class_count_; ++c) {
          double z = bias_.value(0, c);
          for (const auto& [col, x] : row) z += weight_.value(c, col) * x;
          logits[c] = z;
        }
        auto [loss, grad] = softmax_cross_entropy(logits, label);
        (void)loss;
        for (int c = 0; c < class_count_; ++c) {
          const double g = grad[c] * inv;
          bias_.grad(0, c) += g;
          for (const auto& [col, x] : row) weight_.grad(c, col) += g * x;
        }
      }
      adamw_step(ps, config_.optim);
    }
  }
}

std::vector<PseudoLabel> LinearTextClassifier::predict(
    const Corpus& corpus) const {
  if (!fitted_) throw std::runtime_error("predict: classifier is untrained");
  std::vector<PseudoLabel> out;
  out.reserve(corpus.documents.size());
  std::vector<double> logits(class_count_);
  for (const auto& doc : corpus.documents) {
    const auto row = featurizer_.featurize(doc);
    for (int c = 0; c < class_count_; ++c) {
      double z = bias_.value(0, c);
      for (const auto& [col, x] : row) z += weight_.value(c, col) * x;
      logits[c] = z;
    }
    const auto probs = softmax(logits);
    int best = 0;
    for (int c = 1; c < class_count_; ++c)
      if (probs[c] > probs[best]) best = c;
    out.push_back({best, probs[best]});
  }
  return out;
}

void LinearTextClassifier::self_train(const Corpus& corpus,
                                      const SelfTrainConfig& config) {
  if (!fitted_) throw std::runtime_error("self_train: classifier is untrained");
  if (config.confidence_threshold <= 0.5 || config.confidence_threshold > 1.0)
    throw std::invalid_argument("self_train: threshold must be in (0.5, 1]");
  std::vector<std::pair<int, int>> previous;
  for (int round = 0; round < config.rounds; ++round) {
    const auto preds = predict(corpus);
    std::vector<std::pair<int, int>> kept;
    for (size_t i = 0; i < preds.size(); ++i)
      if (preds[i].confidence >= config.confidence_threshold)
        kept.emplace_back(static_cast<int>(i), preds[i].label);
    if (kept.empty()) return;
    if (round > 0 && kept == previous) return;  // fixed point
    train_on(corpus, kept);
    previous = std::move(kept);
  }
}

}  // namespace keygraph
