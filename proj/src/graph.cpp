#include "keygraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace keygraph {

std::vector<int> KeywordGraph::class_vertices(int c) const {
  std::vector<int> ids;
  for (int v = 0; v < vertex_count(); ++v)
    if (vertices[v].class_id == c) ids.push_back(v);
  return ids;
}

std::vector<std::vector<int>> Subgraph::symmetric_adjacency() const {
  std::vector<std::vector<int>> adj(vertex_ids.size());
  for (const auto& e : edges) {
    adj[e.src].push_back(e.dst);
    adj[e.dst].push_back(e.src);
  }
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return adj;
}

KeywordGraph build_graph(const Corpus& corpus, const KeywordSet& set) {
  if (set.empty()) throw std::runtime_error("build_graph: empty keyword set");
  set.require_nonempty_classes();

  KeywordGraph graph;
  graph.num_classes = set.num_classes();
  graph.vertices.resize(set.vertex_count());
  for (int c = 0; c < set.num_classes(); ++c)
    for (const auto& word : set.classes[c]) {
      const auto* e = set.find(word);
      graph.vertices[e->vertex] = {word, c};
    }

  for (const auto& [word, entry] : set.index) {
    if (!corpus.doc_frequency.count(word))
      graph.warnings.push_back("keyword '" + word +
                               "' does not occur in the corpus; vertex " +
                               std::to_string(entry.vertex) + " is isolated");
  }
  std::sort(graph.warnings.begin(), graph.warnings.end());

  // Ordered maps keep the adjacency deterministic regardless of document
  // order; counts are commutative.
  std::vector<std::map<int, long long>> weight(set.vertex_count());
  for (const auto& doc : corpus.documents) {
    const auto occ = keyword_occurrences(doc, set);
    for (size_t p = 0; p < occ.size(); ++p)
      for (size_t q = p + 1; q < occ.size(); ++q)
        if (occ[p].keyword_id != occ[q].keyword_id)
          weight[occ[p].keyword_id][occ[q].keyword_id] += 1;
  }

  graph.out.resize(set.vertex_count());
  graph.out_weight_sum.assign(set.vertex_count(), 0);
  for (int v = 0; v < set.vertex_count(); ++v) {
    for (const auto& [dst, w] : weight[v]) {
      graph.out[v].push_back({dst, w});
      graph.out_weight_sum[v] += w;
    }
  }
  return graph;
}

Subgraph induced_subgraph(const KeywordGraph& graph, std::vector<int> vertex_ids) {
  std::sort(vertex_ids.begin(), vertex_ids.end());
  vertex_ids.erase(std::unique(vertex_ids.begin(), vertex_ids.end()),
                   vertex_ids.end());
  if (vertex_ids.empty())
    throw std::invalid_argument("induced_subgraph: empty vertex set");

  Subgraph sub;
  sub.vertex_ids = std::move(vertex_ids);
  auto local_of = [&sub](int global) {
    auto it = std::lower_bound(sub.vertex_ids.begin(), sub.vertex_ids.end(),
                               global);
    return static_cast<int>(it - sub.vertex_ids.begin());
  };
  for (size_t li = 0; li < sub.vertex_ids.size(); ++li) {
    const int g = sub.vertex_ids[li];
    for (const auto& e : graph.out[g]) {
      if (std::binary_search(sub.vertex_ids.begin(), sub.vertex_ids.end(),
                             e.dst))
        sub.edges.push_back({static_cast<int>(li), local_of(e.dst), e.weight});
    }
  }
  return sub;
}

std::optional<Subgraph> text_to_subgraph(const KeywordGraph& graph,
                                         const Document& doc,
                                         const KeywordSet& set) {
  std::vector<int> hit;
  for (const auto& tok : doc.tokens)
    if (const auto* e = set.find(tok)) hit.push_back(e->vertex);
  if (hit.empty()) return std::nullopt;
  return induced_subgraph(graph, std::move(hit));
}

WalkParams fit_walk_params(const Corpus& corpus, const KeywordSet& set) {
  const int n = corpus.size();
  if (n < 2)
    throw std::runtime_error("fit_walk_params: need at least 2 documents");
  double sum = 0.0;
  std::vector<int> counts(n);
  for (int i = 0; i < n; ++i) {
    counts[i] = kf(corpus.documents[i], set);
    sum += counts[i];
  }
  WalkParams params;
  params.mean = sum / n;
  double ss = 0.0;
  for (int c : counts) {
    const double d = c - params.mean;
    ss += d * d;
  }
  params.variance = ss / (n - 1);
  return params;
}

double transition_probability(const KeywordGraph& graph, int i, int j) {
  if (graph.out_weight_sum[i] == 0)
    throw std::runtime_error("transition_probability: vertex " +
                             std::to_string(i) + " has no out-edges");
  for (const auto& e : graph.out[i])
    if (e.dst == j)
      return static_cast<double>(e.weight) / graph.out_weight_sum[i];
  throw std::runtime_error("transition_probability: no edge " +
                           std::to_string(i) + " -> " + std::to_string(j));
}

int sample_walk_length(const WalkParams& params, Rng& rng) {
  const double draw = rng.gaussian(params.mean, std::sqrt(params.variance));
  const long long rounded = std::llround(draw);
  return static_cast<int>(std::clamp<long long>(rounded, 1, 128));
}

int sample_next_vertex(const KeywordGraph& graph, int v, Rng& rng) {
  const long long total = graph.out_weight_sum[v];
  if (total == 0)
    throw std::runtime_error("sample_next_vertex: vertex is a sink");
  const double r = rng.uniform() * static_cast<double>(total);
  double acc = 0.0;
  for (const auto& e : graph.out[v]) {
    acc += static_cast<double>(e.weight);
    if (r < acc) return e.dst;
  }
  return graph.out[v].back().dst;
}

Subgraph sample_walk(const KeywordGraph& graph, int start,
                     const WalkParams& params, Rng& rng) {
  if (start < 0 || start >= graph.vertex_count())
    throw std::invalid_argument("sample_walk: start vertex out of range");
  const int steps = sample_walk_length(params, rng);
  std::vector<int> traversed = {start};
  int current = start;
  for (int s = 0; s < steps; ++s) {
    if (graph.out_weight_sum[current] == 0) break;  // sink, stop early
    current = sample_next_vertex(graph, current, rng);
    traversed.push_back(current);
  }
  return induced_subgraph(graph, std::move(traversed));
}

void dump_graph(const KeywordGraph& graph, const std::string& vertices_path,
                const std::string& edges_path) {
  std::ofstream vout(vertices_path);
  if (!vout) throw std::runtime_error("dump_graph: cannot write '" + vertices_path + "'");
  for (int v = 0; v < graph.vertex_count(); ++v)
    vout << graph.vertices[v].word << "\t" << graph.vertices[v].class_id
         << "\t" << v << "\n";
  std::ofstream eout(edges_path);
  if (!eout) throw std::runtime_error("dump_graph: cannot write '" + edges_path + "'");
  for (int v = 0; v < graph.vertex_count(); ++v)
    for (const auto& e : graph.out[v])
      eout << graph.vertices[v].word << "\t" << graph.vertices[e.dst].word
           << "\t" << e.weight << "\n";
}

}  // namespace keygraph
