// Command-line surface for the keyword-graph weak-supervision pipeline.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "keygraph/graph.hpp"
#include "keygraph/pipeline.hpp"
#include "keygraph/synth.hpp"

namespace fs = std::filesystem;
using namespace keygraph;

namespace {

void apply_json_config(RunConfig& cfg, const nlohmann::json& j) {
  cfg.corpus_path = j.value("corpus", cfg.corpus_path);
  cfg.keywords_path = j.value("keywords", cfg.keywords_path);
  cfg.output_dir = j.value("output", cfg.output_dir);
  cfg.class_count = j.value("classes", cfg.class_count);
  cfg.extraction.top_z = j.value("top_z", cfg.extraction.top_z);
  cfg.extraction.idf_power = j.value("idf_power", cfg.extraction.idf_power);
  cfg.extraction.min_word_length =
      j.value("min_word_length", cfg.extraction.min_word_length);
  cfg.extraction.use_stopwords = j.value("use_stopwords", cfg.extraction.use_stopwords);
  cfg.epsilon_threshold = j.value("epsilon_threshold", cfg.epsilon_threshold);
  cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
  cfg.ssl.iterations = j.value("ssl_iterations", cfg.ssl.iterations);
  cfg.ssl.batch_size = j.value("ssl_batch_size", cfg.ssl.batch_size);
  cfg.ssl.learning_rate = j.value("ssl_learning_rate", cfg.ssl.learning_rate);
  cfg.finetune_epochs = j.value("finetune_epochs", cfg.finetune_epochs);
  cfg.finetune_batch_size = j.value("finetune_batch_size", cfg.finetune_batch_size);
  cfg.finetune_learning_rate =
      j.value("finetune_learning_rate", cfg.finetune_learning_rate);
  cfg.gin_layers = j.value("gin_layers", cfg.gin_layers);
  cfg.hidden_dim = j.value("hidden_dim", cfg.hidden_dim);
  cfg.classifier.epochs = j.value("classifier_epochs", cfg.classifier.epochs);
  cfg.classifier.batch_size =
      j.value("classifier_batch_size", cfg.classifier.batch_size);
  cfg.classifier.optim.learning_rate =
      j.value("classifier_learning_rate", cfg.classifier.optim.learning_rate);
  cfg.self_train.rounds = j.value("self_train_rounds", cfg.self_train.rounds);
  cfg.self_train.confidence_threshold =
      j.value("confidence_threshold", cfg.self_train.confidence_threshold);
  cfg.counting_baseline = j.value("counting_baseline", cfg.counting_baseline);
  cfg.dump_graphs = j.value("dump_graphs", cfg.dump_graphs);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.deterministic = j.value("deterministic", cfg.deterministic);
}

// Config file first, CLI flags override: the file is read before options are
// registered, so its values become the defaults the parser falls back to.
void load_config_if_requested(RunConfig& cfg, int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) throw std::runtime_error(std::string("cannot open config ") + argv[i + 1]);
      nlohmann::json j;
      in >> j;
      apply_json_config(cfg, j);
      return;
    }
  }
}

void add_pipeline_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file; flags override it");
  cmd->add_option("--corpus", cfg.corpus_path, "corpus JSONL file");
  cmd->add_option("--keywords", cfg.keywords_path, "initial keyword JSONL file");
  cmd->add_option("--out", cfg.output_dir, "output directory");
  cmd->add_option("--classes", cfg.class_count, "number of classes");
  cmd->add_option("--top-z", cfg.extraction.top_z, "keywords per class");
  cmd->add_option("--idf-power", cfg.extraction.idf_power, "idf exponent");
  cmd->add_option("--min-word-length", cfg.extraction.min_word_length);
  cmd->add_option("--epsilon", cfg.epsilon_threshold, "keyword-change stop threshold");
  cmd->add_option("--max-iterations", cfg.max_iterations);
  cmd->add_option("--ssl-iterations", cfg.ssl.iterations, "pretext walk samples");
  cmd->add_option("--ssl-batch-size", cfg.ssl.batch_size);
  cmd->add_option("--ssl-learning-rate", cfg.ssl.learning_rate);
  cmd->add_option("--finetune-epochs", cfg.finetune_epochs);
  cmd->add_option("--finetune-batch-size", cfg.finetune_batch_size);
  cmd->add_option("--finetune-learning-rate", cfg.finetune_learning_rate);
  cmd->add_option("--gin-layers", cfg.gin_layers);
  cmd->add_option("--hidden-dim", cfg.hidden_dim);
  cmd->add_option("--classifier-epochs", cfg.classifier.epochs);
  cmd->add_option("--classifier-batch-size", cfg.classifier.batch_size);
  cmd->add_option("--classifier-learning-rate", cfg.classifier.optim.learning_rate);
  cmd->add_option("--self-train-rounds", cfg.self_train.rounds);
  cmd->add_option("--confidence-threshold", cfg.self_train.confidence_threshold);
  cmd->add_flag("--counting-baseline", cfg.counting_baseline,
                "use keyword voting instead of the annotator");
  cmd->add_flag("--dump-graphs", cfg.dump_graphs, "write graph TSV diagnostics");
  cmd->add_option("--seed", cfg.seed);
  cmd->add_flag("--deterministic,!--no-deterministic", cfg.deterministic);
}

void print_iteration(const IterationState& s) {
  std::printf("iteration %d: coverage=%.4f covered=%d delta=%.4f",
              s.iteration, s.metrics.coverage, s.metrics.covered_count,
              s.metrics.delta);
  if (s.metrics.pseudo)
    std::printf(" pseudo_micro=%.4f pseudo_macro=%.4f", s.metrics.pseudo->micro_f1,
                s.metrics.pseudo->macro_f1);
  if (s.metrics.classifier)
    std::printf(" micro=%.4f macro=%.4f", s.metrics.classifier->micro_f1,
                s.metrics.classifier->macro_f1);
  std::printf(" wall=%.1fs\n", s.metrics.wall_time_seconds);
  std::fflush(stdout);
}

int count_completed(const std::string& output_dir) {
  int n = 0;
  while (fs::exists(fs::path(iteration_dir(output_dir, n)) / "metrics.json")) ++n;
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly-supervised text classification over keyword graphs"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  try {
    load_config_if_requested(cfg, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  auto* run = app.add_subcommand("run", "run the full iterative loop");
  add_pipeline_options(run, cfg, config_path);

  auto* iterate = app.add_subcommand(
      "iterate", "run exactly one more iteration on a state directory");
  add_pipeline_options(iterate, cfg, config_path);

  auto* annotate_cmd =
      app.add_subcommand("annotate", "train the annotator and write pseudo-labels");
  std::string labels_out = "pseudo_labels.jsonl";
  add_pipeline_options(annotate_cmd, cfg, config_path);
  annotate_cmd->add_option("--out-labels", labels_out, "pseudo-label output file");

  auto* extract_cmd =
      app.add_subcommand("extract", "re-extract keywords from predictions");
  std::string predictions_path, keywords_out = "keywords.jsonl";
  add_pipeline_options(extract_cmd, cfg, config_path);
  extract_cmd->add_option("--predictions", predictions_path, "prediction JSONL file")
      ->required();
  extract_cmd->add_option("--out-keywords", keywords_out, "keyword output file");

  auto* eval_cmd =
      app.add_subcommand("eval", "score predictions against corpus gold labels");
  std::string eval_predictions;
  add_pipeline_options(eval_cmd, cfg, config_path);
  eval_cmd->add_option("--predictions", eval_predictions, "prediction JSONL file")
      ->required();

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  SynthSpec synth;
  std::string synth_corpus = "corpus.jsonl", synth_keywords = "keywords.jsonl";
  synth_cmd->add_option("--classes", synth.classes);
  synth_cmd->add_option("--docs", synth.num_documents);
  synth_cmd->add_option("--ambiguity", synth.ambiguity);
  synth_cmd->add_option("--context-words", synth.context_words_per_class);
  synth_cmd->add_option("--initial-keywords", synth.initial_keywords_per_class);
  synth_cmd->add_option("--theme-words", synth.theme_words_per_class);
  synth_cmd->add_option("--filler-words", synth.shared_filler_words);
  synth_cmd->add_option("--pivot-in-class0", synth.pivot_in_class0);
  synth_cmd->add_option("--pivot-in-others", synth.pivot_in_others);
  synth_cmd->add_option("--class0-prior", synth.class0_prior);
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--out-corpus", synth_corpus);
  synth_cmd->add_option("--out-keywords", synth_keywords);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      for (const auto& s : run_until_convergence(cfg)) print_iteration(s);
    } else if (app.got_subcommand(iterate)) {
      if (cfg.output_dir.empty())
        throw std::runtime_error("iterate: --out state directory is required");
      cfg.max_iterations = count_completed(cfg.output_dir) + 1;
      const auto states = run_until_convergence(cfg);
      if (!states.empty()) print_iteration(states.back());
    } else if (app.got_subcommand(annotate_cmd)) {
      const Corpus corpus = load_corpus(cfg.corpus_path, cfg.class_count);
      const KeywordSet keywords =
          load_keywords(cfg.keywords_path, cfg.class_count);
      PseudoLabeling pseudo;
      if (cfg.counting_baseline) {
        pseudo = counting_labels(corpus, keywords);
      } else {
        const KeywordGraph graph = build_graph(corpus, keywords);
        const WalkParams walk = fit_walk_params(corpus, keywords);
        Rng init_rng(mix_seed(cfg.seed, 1));
        AnnotatorModel model =
            AnnotatorModel::make(corpus.class_count, graph.feature_dim(),
                                 cfg.hidden_dim, cfg.gin_layers, init_rng);
        Rng ssl_rng(mix_seed(cfg.seed, 2));
        ssl_pretrain(model, graph, walk, cfg.ssl, ssl_rng);
        Rng ft_rng(mix_seed(cfg.seed, 3));
        finetune(model, graph, corpus, keywords, cfg.finetune_epochs,
                 cfg.finetune_batch_size, cfg.finetune_learning_rate, ft_rng);
        pseudo = annotate(model, graph, corpus, keywords);
      }
      save_pseudo_labels(pseudo, corpus, labels_out);
      std::printf("covered %d of %d documents; labels written to %s\n",
                  pseudo.covered_count, corpus.size(), labels_out.c_str());
    } else if (app.got_subcommand(extract_cmd)) {
      const Corpus corpus = load_corpus(cfg.corpus_path, cfg.class_count);
      const auto preds = load_predictions(predictions_path, corpus);
      std::vector<int> labels(preds.size());
      for (size_t i = 0; i < preds.size(); ++i) labels[i] = preds[i].label;
      const ScoreTable scores = score_words(corpus, labels, cfg.extraction);
      for (const auto& w : scores.warnings) std::cerr << "warning: " << w << "\n";
      save_keywords(extract_keywords(scores, cfg.extraction), keywords_out);
      std::printf("keywords written to %s\n", keywords_out.c_str());
    } else if (app.got_subcommand(eval_cmd)) {
      const Corpus corpus = load_corpus(cfg.corpus_path, cfg.class_count);
      const auto preds = load_predictions(eval_predictions, corpus);
      std::vector<int> pred, gold;
      for (size_t i = 0; i < preds.size(); ++i) {
        if (!corpus.documents[i].gold_label) continue;
        pred.push_back(preds[i].label);
        gold.push_back(*corpus.documents[i].gold_label);
      }
      const EvalResult r = evaluate(pred, gold);
      nlohmann::json j;
      j["micro_f1"] = r.micro_f1;
      j["macro_f1"] = r.macro_f1;
      j["accuracy"] = r.accuracy;
      j["labeled_documents"] = static_cast<int>(gold.size());
      std::cout << j.dump(2) << "\n";
    } else if (app.got_subcommand(synth_cmd)) {
      const SynthResult result = generate_synthetic_corpus(synth);
      save_corpus(result.corpus, synth_corpus);
      save_keywords(result.initial_keywords, synth_keywords);
      nlohmann::json j;
      j["documents"] = result.corpus.size();
      j["ambiguous"] = result.ambiguous_count;
      j["covered"] = result.covered;
      j["counting_accuracy_on_covered"] = result.counting_accuracy;
      std::cout << j.dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
