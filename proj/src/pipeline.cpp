#include "keygraph/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "keygraph/graph.hpp"
#include "keygraph/rng.hpp"

namespace keygraph {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (class_count < 1)
    throw std::invalid_argument("config: class_count must be >= 1");
  if (epsilon_threshold <= 0.0 || epsilon_threshold >= 1.0)
    throw std::invalid_argument("config: epsilon_threshold must be in (0, 1)");
  if (max_iterations < 0)
    throw std::invalid_argument("config: max_iterations must be >= 0");
  if (extraction.top_z < 1)
    throw std::invalid_argument("config: top_z must be >= 1");
  if (extraction.idf_power < 1)
    throw std::invalid_argument("config: idf_power must be >= 1");
  if (ssl.iterations < 1 || ssl.batch_size < 1 || ssl.learning_rate <= 0.0)
    throw std::invalid_argument("config: invalid ssl settings");
  if (finetune_epochs < 0 || finetune_batch_size < 1 ||
      finetune_learning_rate <= 0.0)
    throw std::invalid_argument("config: invalid finetune settings");
  if (gin_layers < 1 || hidden_dim < 1)
    throw std::invalid_argument("config: invalid annotator dimensions");
  if (classifier.epochs < 0 || classifier.batch_size < 1 ||
      classifier.optim.learning_rate <= 0.0)
    throw std::invalid_argument("config: invalid classifier settings");
  if (self_train.rounds < 0 || self_train.confidence_threshold <= 0.5 ||
      self_train.confidence_threshold > 1.0)
    throw std::invalid_argument("config: invalid self-train settings");
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("stage ") + name + ": " + e.what());
  }
}

std::vector<int> prediction_labels(const std::vector<PseudoLabel>& preds) {
  std::vector<int> labels(preds.size());
  for (size_t i = 0; i < preds.size(); ++i) labels[i] = preds[i].label;
  return labels;
}

}  // namespace

IterationState run_iteration(const Corpus& corpus, const KeywordSet& current,
                             int iteration_index, const RunConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const double cov = stage("coverage", [&] {
    const double c = coverage(corpus, current);
    if (c <= 0.0) throw std::runtime_error("keywords hit no documents");
    return c;
  });

  const std::uint64_t base =
      mix_seed(config.seed, static_cast<std::uint64_t>(iteration_index));

  IterationState state;
  state.iteration = iteration_index;

  if (config.counting_baseline) {
    state.pseudo = stage("annotate", [&] { return counting_labels(corpus, current); });
  } else {
    const KeywordGraph graph =
        stage("build_graph", [&] { return build_graph(corpus, current); });
    const WalkParams walk =
        stage("fit_walk_params", [&] { return fit_walk_params(corpus, current); });
    Rng init_rng(mix_seed(base, 1));
    AnnotatorModel model =
        AnnotatorModel::make(corpus.class_count, graph.feature_dim(),
                             config.hidden_dim, config.gin_layers, init_rng);
    stage("ssl_pretrain", [&] {
      Rng rng(mix_seed(base, 2));
      ssl_pretrain(model, graph, walk, config.ssl, rng);
      return 0;
    });
    stage("finetune", [&] {
      Rng rng(mix_seed(base, 3));
      finetune(model, graph, corpus, current, config.finetune_epochs,
               config.finetune_batch_size, config.finetune_learning_rate, rng);
      return 0;
    });
    state.pseudo =
        stage("annotate", [&] { return annotate(model, graph, corpus, current); });
  }

  LinearTextClassifier classifier(corpus.class_count, config.classifier,
                                  mix_seed(base, 4));
  stage("classifier_train", [&] {
    classifier.train(corpus, state.pseudo);
    return 0;
  });
  stage("self_train", [&] {
    classifier.self_train(corpus, config.self_train);
    return 0;
  });
  state.predictions = stage("predict", [&] { return classifier.predict(corpus); });

  const ScoreTable scores = stage("score_words", [&] {
    return score_words(corpus, prediction_labels(state.predictions),
                       config.extraction);
  });
  state.keywords = stage("extract_keywords",
                         [&] { return extract_keywords(scores, config.extraction); });
  state.delta_report =
      stage("keyword_delta", [&] { return keyword_delta(current, state.keywords); });

  state.metrics.iteration = iteration_index;
  state.metrics.coverage = cov;
  state.metrics.covered_count = state.pseudo.covered_count;
  state.metrics.delta = state.delta_report.delta;

  std::vector<int> gold_all, pred_all, gold_cov, pseudo_cov;
  for (size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& gold = corpus.documents[i].gold_label;
    if (!gold) continue;
    gold_all.push_back(*gold);
    pred_all.push_back(state.predictions[i].label);
    if (state.pseudo.per_doc[i]) {
      gold_cov.push_back(*gold);
      pseudo_cov.push_back(state.pseudo.per_doc[i]->label);
    }
  }
  if (!gold_all.empty()) state.metrics.classifier = evaluate(pred_all, gold_all);
  if (!gold_cov.empty()) state.metrics.pseudo = evaluate(pseudo_cov, gold_cov);

  state.metrics.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return state;
}

std::string iteration_dir(const std::string& output_dir, int iteration) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "iter_%03d", iteration);
  return (fs::path(output_dir) / buf).string();
}

namespace {

void persist_iteration(const IterationState& state, const Corpus& corpus,
                       const RunConfig& config) {
  const fs::path dir = iteration_dir(config.output_dir, state.iteration);
  fs::create_directories(dir);
  save_keywords(state.keywords, (dir / "keywords.jsonl").string());
  save_pseudo_labels(state.pseudo, corpus, (dir / "pseudo_labels.jsonl").string());
  save_predictions(state.predictions, corpus, (dir / "predictions.jsonl").string());
  std::ofstream timing(fs::path(config.output_dir) / "timings.tsv",
                       std::ios::app);
  timing << state.iteration << "\t" << state.metrics.wall_time_seconds << "\n";
  // metrics.json is written last and marks the iteration as complete
  save_metrics(state.metrics, (dir / "metrics.json").string());
}

IterationState reload_iteration(const Corpus& corpus, const RunConfig& config,
                                int iteration) {
  const fs::path dir = iteration_dir(config.output_dir, iteration);
  IterationState state;
  state.iteration = iteration;
  state.keywords =
      load_keywords((dir / "keywords.jsonl").string(), config.class_count);
  state.pseudo = load_pseudo_labels((dir / "pseudo_labels.jsonl").string(), corpus);
  state.predictions =
      load_predictions((dir / "predictions.jsonl").string(), corpus);
  state.metrics = load_metrics((dir / "metrics.json").string());
  state.delta_report.delta = state.metrics.delta;
  return state;
}

}  // namespace

std::vector<IterationState> run_loop(const Corpus& corpus,
                                     const KeywordSet& initial,
                                     const RunConfig& config) {
  config.validate();
  std::vector<IterationState> states;

  const bool persist = !config.output_dir.empty();
  if (persist) fs::create_directories(config.output_dir);

  // Resume after the last iteration whose metrics file exists.
  int next = 0;
  if (persist) {
    while (fs::exists(fs::path(iteration_dir(config.output_dir, next)) /
                      "metrics.json")) {
      states.push_back(reload_iteration(corpus, config, next));
      ++next;
    }
  }

  const KeywordSet* current = states.empty() ? &initial : &states.back().keywords;
  while (next < config.max_iterations) {
    if (!states.empty() &&
        states.back().delta_report.delta < config.epsilon_threshold)
      break;  // already converged (covers resumed runs)
    IterationState state = run_iteration(corpus, *current, next, config);
    if (persist) persist_iteration(state, corpus, config);
    states.push_back(std::move(state));
    current = &states.back().keywords;
    ++next;
  }
  return states;
}

std::vector<IterationState> run_until_convergence(const RunConfig& config) {
  config.validate();
  if (config.corpus_path.empty() || config.keywords_path.empty())
    throw std::invalid_argument("config: corpus and keyword paths are required");
  const Corpus corpus = load_corpus(config.corpus_path, config.class_count);
  const KeywordSet initial =
      load_keywords(config.keywords_path, config.class_count);
  return run_loop(corpus, initial, config);
}

}  // namespace keygraph
