#pragma once

#include <optional>
#include <string>
#include <vector>

#include "keygraph/graph.hpp"
#include "keygraph/nn.hpp"

namespace keygraph {

// [class one-hot ; vertex-index one-hot] rows for the subgraph's vertices,
// in vertex_ids order. Exactly two ones per row.
Tensor node_features(const KeywordGraph& graph, const Subgraph& sub);

// Dense 0/1 symmetric adjacency of the subgraph (no self entries).
Tensor adjacency_matrix(const Subgraph& sub);

// One GIN update: h_v' = mlp((1 + epsilon) * h_v + sum of neighbor features).
// Neighborhoods are symmetrized and unweighted; edge direction and weights
// only drive the walk sampler.
Tape::Var gin_layer(Tape& tape, const Tensor& adjacency, Tape::Var features,
                    Parameter& epsilon, MLPBlock& mlp);
Tape::Var gin_layer(Tape& tape, const Subgraph& sub, Tape::Var features,
                    Parameter& epsilon, MLPBlock& mlp);

// Concatenation of per-layer vertex-feature sums (layer 0 through K).
Tape::Var readout(Tape& tape, const std::vector<Tape::Var>& per_layer);

struct GinLayer {
  Parameter epsilon;  // 1x1, initialized to 0
  MLPBlock mlp;
};

// K-layer GIN with a linear classification head over the readout. The head
// starts at zero so an untrained model emits uniform class probabilities.
struct AnnotatorModel {
  int num_classes = 0;
  int input_dim = 0;
  int hidden_dim = 64;
  std::vector<GinLayer> layers;
  DenseLayer head;  // readout_dim x C
  long long train_steps = 0;

  static AnnotatorModel make(int num_classes, int input_dim, int hidden_dim,
                             int num_layers, Rng& rng);

  int num_layers() const { return static_cast<int>(layers.size()); }
  int readout_dim() const { return input_dim + num_layers() * hidden_dim; }

  Tape::Var forward(Tape& tape, const KeywordGraph& graph, const Subgraph& sub);

  // Same computation on raw inputs; rows of features and adjacency describe
  // the same vertex order.
  Tape::Var forward_features(Tape& tape, const Tensor& features,
                             const Tensor& adjacency);

  // Class probabilities for a subgraph; sums to 1.
  std::vector<double> predict_proba(const KeywordGraph& graph, const Subgraph& sub);

  std::vector<Parameter*> parameters();

  // Flat checkpoint: text header (shapes, epsilon values, train step count)
  // followed by raw little-endian 64-bit weight values in declaration order.
  void save(const std::string& path) const;
  static AnnotatorModel load(const std::string& path);
};

struct SslConfig {
  // Number of walk samples drawn (loop passes of the pretext task); samples
  // are grouped into minibatches of batch_size per optimizer step.
  long long iterations = 20000;
  int batch_size = 50;
  double learning_rate = 1e-4;
};

// Pretext task: sample a class, a start keyword within it and a walk; train
// the model to recover the start keyword's class from the walk subgraph.
// Errors before training if any class has no keywords.
void ssl_pretrain(AnnotatorModel& model, const KeywordGraph& graph,
                  const WalkParams& params, const SslConfig& config, Rng& rng);

// argmax over classes of summed keyword term frequencies; nullopt when the
// document contains no keywords; ties go to the lowest class index.
std::optional<int> voting_label(const Document& doc, const KeywordSet& set);

// Cross-entropy on text subgraphs against voting labels, covered documents
// only, fresh optimizer state. Errors when no document is covered.
void finetune(AnnotatorModel& model, const KeywordGraph& graph,
              const Corpus& corpus, const KeywordSet& set, int epochs,
              int batch_size, double learning_rate, Rng& rng);

struct PseudoLabel {
  int label;
  double confidence;  // max softmax probability, in (0, 1]
};

struct PseudoLabeling {
  std::vector<std::optional<PseudoLabel>> per_doc;  // aligned with corpus
  int covered_count = 0;
};

// Annotate every covered document with the model's argmax class.
PseudoLabeling annotate(AnnotatorModel& model, const KeywordGraph& graph,
                        const Corpus& corpus, const KeywordSet& set);

// Baseline labeling that uses keyword voting directly (confidence 1).
PseudoLabeling counting_labels(const Corpus& corpus, const KeywordSet& set);

}  // namespace keygraph
