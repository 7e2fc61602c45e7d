#include "keygraph/annotator.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace keygraph {

Tensor node_features(const KeywordGraph& graph, const Subgraph& sub) {
  Tensor feat(sub.size(), graph.feature_dim());
  for (int r = 0; r < sub.size(); ++r) {
    const int v = sub.vertex_ids[r];
    feat(r, graph.vertices[v].class_id) = 1.0;
    feat(r, graph.num_classes + v) = 1.0;
  }
  return feat;
}

Tensor adjacency_matrix(const Subgraph& sub) {
  Tensor a(sub.size(), sub.size());
  for (const auto& e : sub.edges) {
    if (e.src == e.dst) continue;
    a(e.src, e.dst) = 1.0;
    a(e.dst, e.src) = 1.0;
  }
  return a;
}

Tape::Var gin_layer(Tape& tape, const Tensor& adjacency, Tape::Var features,
                    Parameter& epsilon, MLPBlock& mlp) {
  if (tape.value(features).rows != adjacency.rows ||
      adjacency.rows != adjacency.cols)
    throw std::invalid_argument("gin_layer: feature rows != vertex count");
  Tape::Var self = tape.scale_shift(features, tape.param(epsilon), 1.0);
  Tape::Var nbrs = tape.matmul(tape.input(adjacency), features);
  return mlp.forward(tape, tape.add(self, nbrs));
}

Tape::Var gin_layer(Tape& tape, const Subgraph& sub, Tape::Var features,
                    Parameter& epsilon, MLPBlock& mlp) {
  return gin_layer(tape, adjacency_matrix(sub), features, epsilon, mlp);
}

Tape::Var readout(Tape& tape, const std::vector<Tape::Var>& per_layer) {
  std::vector<Tape::Var> sums;
  sums.reserve(per_layer.size());
  for (Tape::Var h : per_layer) sums.push_back(tape.sum_rows(h));
  return tape.concat_cols(sums);
}

AnnotatorModel AnnotatorModel::make(int num_classes, int input_dim,
                                    int hidden_dim, int num_layers, Rng& rng) {
  if (num_classes < 1 || input_dim < 1 || hidden_dim < 1 || num_layers < 1)
    throw std::invalid_argument("AnnotatorModel: all dimensions must be positive");
  AnnotatorModel model;
  model.num_classes = num_classes;
  model.input_dim = input_dim;
  model.hidden_dim = hidden_dim;
  for (int k = 0; k < num_layers; ++k) {
    GinLayer layer;
    layer.epsilon = Parameter(Tensor(1, 1));
    const int in = k == 0 ? input_dim : hidden_dim;
    layer.mlp = MLPBlock::make({in, hidden_dim, hidden_dim}, rng);
    model.layers.push_back(std::move(layer));
  }
  model.head.weight = Parameter(Tensor(model.readout_dim(), num_classes));
  model.head.bias = Parameter(Tensor(1, num_classes));
  return model;
}

Tape::Var AnnotatorModel::forward(Tape& tape, const KeywordGraph& graph,
                                  const Subgraph& sub) {
  return forward_features(tape, node_features(graph, sub), adjacency_matrix(sub));
}

Tape::Var AnnotatorModel::forward_features(Tape& tape, const Tensor& features,
                                           const Tensor& adjacency) {
  Tape::Var h = tape.input(features);
  std::vector<Tape::Var> per_layer = {h};
  for (auto& layer : layers) {
    h = gin_layer(tape, adjacency, h, layer.epsilon, layer.mlp);
    per_layer.push_back(h);
  }
  Tape::Var pooled = readout(tape, per_layer);
  Tape::Var w = tape.param(head.weight);
  Tape::Var b = tape.param(head.bias);
  return tape.add_row(tape.matmul(pooled, w), b);
}

std::vector<double> AnnotatorModel::predict_proba(const KeywordGraph& graph,
                                                  const Subgraph& sub) {
  Tape tape;
  Tape::Var logits = forward(tape, graph, sub);
  return softmax(tape.value(logits).v);
}

std::vector<Parameter*> AnnotatorModel::parameters() {
  std::vector<Parameter*> ps;
  for (auto& layer : layers) {
    ps.push_back(&layer.epsilon);
    for (Parameter* p : layer.mlp.parameters()) ps.push_back(p);
  }
  ps.push_back(&head.weight);
  ps.push_back(&head.bias);
  return ps;
}

void AnnotatorModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot write '" + path + "'");
  out << "keygraph-annotator-v1\n";
  out << "classes " << num_classes << "\n";
  out << "input_dim " << input_dim << "\n";
  out << "hidden_dim " << hidden_dim << "\n";
  out << "gin_layers " << num_layers() << "\n";
  out << "epsilon";
  char buf[64];
  for (const auto& layer : layers) {
    std::snprintf(buf, sizeof buf, " %.17g", layer.epsilon.value(0, 0));
    out << buf;
  }
  out << "\n";
  out << "train_steps " << train_steps << "\n";
  out << "weights\n";
  auto write_tensor = [&out](const Tensor& t) {
    out.write(reinterpret_cast<const char*>(t.v.data()),
              static_cast<std::streamsize>(t.v.size() * sizeof(double)));
  };
  for (const auto& layer : layers)
    for (const auto& dense : layer.mlp.layers) {
      write_tensor(dense.weight.value);
      write_tensor(dense.bias.value);
    }
  write_tensor(head.weight.value);
  write_tensor(head.bias.value);
}

AnnotatorModel AnnotatorModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open '" + path + "'");
  std::string line;
  auto expect_line = [&in, &line, &path](const std::string& key) {
    if (!std::getline(in, line) || line.rfind(key, 0) != 0)
      throw std::runtime_error("checkpoint: malformed header in '" + path +
                               "' (expected " + key + ")");
    return line.substr(key.size());
  };
  expect_line("keygraph-annotator-v1");
  const int classes = std::stoi(expect_line("classes "));
  const int input_dim = std::stoi(expect_line("input_dim "));
  const int hidden_dim = std::stoi(expect_line("hidden_dim "));
  const int num_layers = std::stoi(expect_line("gin_layers "));
  std::istringstream eps_line(expect_line("epsilon"));
  std::vector<double> eps(num_layers);
  for (auto& e : eps)
    if (!(eps_line >> e))
      throw std::runtime_error("checkpoint: bad epsilon list in '" + path + "'");
  const long long steps = std::stoll(expect_line("train_steps "));
  expect_line("weights");

  Rng dummy(0);
  AnnotatorModel model = make(classes, input_dim, hidden_dim, num_layers, dummy);
  model.train_steps = steps;
  for (int k = 0; k < num_layers; ++k) model.layers[k].epsilon.value(0, 0) = eps[k];
  auto read_tensor = [&in, &path](Tensor& t) {
    in.read(reinterpret_cast<char*>(t.v.data()),
            static_cast<std::streamsize>(t.v.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated weights in '" + path + "'");
  };
  for (auto& layer : model.layers)
    for (auto& dense : layer.mlp.layers) {
      read_tensor(dense.weight.value);
      read_tensor(dense.bias.value);
    }
  read_tensor(model.head.weight.value);
  read_tensor(model.head.bias.value);
  return model;
}

void ssl_pretrain(AnnotatorModel& model, const KeywordGraph& graph,
                  const WalkParams& params, const SslConfig& config, Rng& rng) {
  if (config.iterations < 1 || config.batch_size < 1 || config.learning_rate <= 0)
    throw std::invalid_argument("ssl_pretrain: invalid config");
  std::vector<std::vector<int>> by_class(graph.num_classes);
  for (int c = 0; c < graph.num_classes; ++c) {
    by_class[c] = graph.class_vertices(c);
    if (by_class[c].empty())
      throw std::runtime_error("ssl_pretrain: class " + std::to_string(c) +
                               " has no keywords");
  }

  OptimizerConfig opt;
  opt.learning_rate = config.learning_rate;
  std::vector<Parameter*> ps = model.parameters();
  Tape tape;
  long long done = 0;
  while (done < config.iterations) {
    const int batch = static_cast<int>(
        std::min<long long>(config.batch_size, config.iterations - done));
    zero_grads(ps);
    const double seed = 1.0 / batch;
    for (int b = 0; b < batch; ++b) {
      const int cls = static_cast<int>(rng.uniform_int(graph.num_classes));
      const auto& verts = by_class[cls];
      const int start = verts[rng.uniform_int(verts.size())];
      const Subgraph walk = sample_walk(graph, start, params, rng);
      tape.clear();
      Tape::Var logits = model.forward(tape, graph, walk);
      Tape::Var loss = tape.softmax_cross_entropy_loss(logits, cls);
      tape.backward(loss, seed);
    }
    adamw_step(ps, opt);
    model.train_steps += 1;
    done += batch;
  }
}

std::optional<int> voting_label(const Document& doc, const KeywordSet& set) {
  std::vector<long long> votes(set.num_classes(), 0);
  long long total = 0;
  for (const auto& tok : doc.tokens) {
    if (const auto* e = set.find(tok)) {
      votes[e->class_id] += 1;
      ++total;
    }
  }
  if (total == 0) return std::nullopt;
  int best = 0;
  for (int c = 1; c < set.num_classes(); ++c)
    if (votes[c] > votes[best]) best = c;
  return best;
}

void finetune(AnnotatorModel& model, const KeywordGraph& graph,
              const Corpus& corpus, const KeywordSet& set, int epochs,
              int batch_size, double learning_rate, Rng& rng) {
  if (epochs <= 0) return;
  if (batch_size < 1 || learning_rate <= 0)
    throw std::invalid_argument("finetune: invalid config");

  std::vector<std::pair<Subgraph, int>> examples;
  for (const auto& doc : corpus.documents) {
    auto sub = text_to_subgraph(graph, doc, set);
    if (!sub) continue;  // uncovered documents contribute nothing
    auto label = voting_label(doc, set);
    examples.emplace_back(std::move(*sub), *label);
  }
  if (examples.empty())
    throw std::runtime_error("finetune: no document contains a keyword");

  std::vector<Parameter*> ps = model.parameters();
  for (Parameter* p : ps) p->reset_optimizer_state();
  OptimizerConfig opt;
  opt.learning_rate = learning_rate;

  std::vector<int> order(examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  Tape tape;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.uniform_int(i)]);
    for (size_t begin = 0; begin < order.size(); begin += batch_size) {
      const size_t end = std::min(begin + batch_size, order.size());
      zero_grads(ps);
      const double seed = 1.0 / static_cast<double>(end - begin);
      for (size_t i = begin; i < end; ++i) {
        const auto& [sub, label] = examples[order[i]];
        tape.clear();
        Tape::Var logits = model.forward(tape, graph, sub);
        Tape::Var loss = tape.softmax_cross_entropy_loss(logits, label);
        tape.backward(loss, seed);
      }
      adamw_step(ps, opt);
      model.train_steps += 1;
    }
  }
}

PseudoLabeling annotate(AnnotatorModel& model, const KeywordGraph& graph,
                        const Corpus& corpus, const KeywordSet& set) {
  PseudoLabeling out;
  out.per_doc.resize(corpus.documents.size());
  for (size_t i = 0; i < corpus.documents.size(); ++i) {
    auto sub = text_to_subgraph(graph, corpus.documents[i], set);
    if (!sub) continue;
    const auto probs = model.predict_proba(graph, *sub);
    int best = 0;
    for (int c = 1; c < static_cast<int>(probs.size()); ++c)
      if (probs[c] > probs[best]) best = c;
    out.per_doc[i] = PseudoLabel{best, probs[best]};
    ++out.covered_count;
  }
  return out;
}

PseudoLabeling counting_labels(const Corpus& corpus, const KeywordSet& set) {
  PseudoLabeling out;
  out.per_doc.resize(corpus.documents.size());
  for (size_t i = 0; i < corpus.documents.size(); ++i) {
    if (auto label = voting_label(corpus.documents[i], set)) {
      out.per_doc[i] = PseudoLabel{*label, 1.0};
      ++out.covered_count;
    }
  }
  return out;
}

}  // namespace keygraph
