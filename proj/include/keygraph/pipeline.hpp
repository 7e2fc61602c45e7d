#pragma once

#include <string>
#include <vector>

#include "keygraph/annotator.hpp"
#include "keygraph/classifier.hpp"
#include "keygraph/extraction.hpp"
#include "keygraph/io.hpp"
#include "keygraph/metrics.hpp"

namespace keygraph {

struct RunConfig {
  std::string corpus_path;
  std::string keywords_path;
  std::string output_dir;  // empty disables persistence and resume

  int class_count = 0;
  ExtractionConfig extraction;
  double epsilon_threshold = 0.1;  // stop when delta falls below this
  int max_iterations = 10;

  SslConfig ssl;
  int finetune_epochs = 10;
  int finetune_batch_size = 256;
  double finetune_learning_rate = 1e-4;
  int gin_layers = 3;
  int hidden_dim = 64;

  ClassifierTrainConfig classifier;
  SelfTrainConfig self_train;

  // Replace the annotator with keyword voting (ablation baseline).
  bool counting_baseline = false;
  bool dump_graphs = false;

  std::uint64_t seed = 1;
  bool deterministic = true;  // runs are single-threaded and seeded either way

  void validate() const;
};

struct IterationState {
  int iteration = 0;
  KeywordSet keywords;  // extracted at the end of the iteration
  PseudoLabeling pseudo;
  std::vector<PseudoLabel> predictions;
  DeltaReport delta_report;
  MetricsReport metrics;
};

// One pass of the loop: graph -> walk stats -> pretrain -> finetune ->
// annotate -> classifier train + self-train -> predict -> score -> extract
// -> delta. Errors carry the failing stage's name.
IterationState run_iteration(const Corpus& corpus, const KeywordSet& current,
                             int iteration_index, const RunConfig& config);

// Iterate run_iteration until delta < epsilon_threshold or max_iterations.
// With output_dir set, each iteration is persisted on completion and a rerun
// resumes after the last completed iteration. Returns all states, including
// reloaded ones.
std::vector<IterationState> run_loop(const Corpus& corpus,
                                     const KeywordSet& initial,
                                     const RunConfig& config);

// Convenience entry: load corpus and initial keywords from config paths.
std::vector<IterationState> run_until_convergence(const RunConfig& config);

std::string iteration_dir(const std::string& output_dir, int iteration);

}  // namespace keygraph
