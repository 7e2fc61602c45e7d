#pragma once

#include <optional>
#include <string>
#include <vector>

#include "keygraph/keywords.hpp"
#include "keygraph/rng.hpp"
#include "keygraph/tensor.hpp"

namespace keygraph {

struct GraphEdge {
  int dst;
  long long weight;  // co-occurrence count, >= 1
};

// Directed keyword co-occurrence graph. Vertex index equals the keyword's
// global index in the KeywordSet it was built from. Immutable after build.
struct KeywordGraph {
  struct Vertex {
    std::string word;
    int class_id;
  };

  int num_classes = 0;
  std::vector<Vertex> vertices;
  std::vector<std::vector<GraphEdge>> out;  // sorted by dst
  std::vector<long long> out_weight_sum;
  std::vector<std::string> warnings;

  int vertex_count() const { return static_cast<int>(vertices.size()); }

  // Node features are [class one-hot ; vertex-index one-hot].
  int feature_dim() const { return num_classes + vertex_count(); }

  // Vertices of class c, ascending. Empty when the class has no keywords.
  std::vector<int> class_vertices(int c) const;
};

// Edge endpoints are positions into Subgraph::vertex_ids (local indices).
struct SubgraphEdge {
  int src;
  int dst;
  long long weight;
};

struct Subgraph {
  std::vector<int> vertex_ids;  // global vertex ids, sorted ascending
  std::vector<SubgraphEdge> edges;

  int size() const { return static_cast<int>(vertex_ids.size()); }

  // Union of in- and out-neighbors per local vertex, deduplicated, no self
  // entries. This is the aggregation neighborhood for the annotator.
  std::vector<std::vector<int>> symmetric_adjacency() const;
};

// For every document and every ordered pair of keyword occurrences at
// positions p < q with distinct keywords, the edge (keyword at p) ->
// (keyword at q) gains weight 1. No window limit, no self-loops. Keywords
// never seen in the corpus become isolated vertices and leave a warning.
KeywordGraph build_graph(const Corpus& corpus, const KeywordSet& set);

// All graph edges with both endpoints in vertex_ids, weights retained.
Subgraph induced_subgraph(const KeywordGraph& graph, std::vector<int> vertex_ids);

// Induced subgraph of the distinct keywords occurring in doc; nullopt when
// the document contains no keywords.
std::optional<Subgraph> text_to_subgraph(const KeywordGraph& graph,
                                         const Document& doc,
                                         const KeywordSet& set);

// Gaussian over per-document keyword counts, fit on the whole corpus.
struct WalkParams {
  double mean = 0.0;
  double variance = 0.0;
};

// mean = average kf over all documents; variance uses the n-1 denominator.
// kf = 0 documents are included. Requires n >= 2.
WalkParams fit_walk_params(const Corpus& corpus, const KeywordSet& set);

// weight(i->j) / total outgoing weight of i. Errors when i is a sink or the
// edge does not exist.
double transition_probability(const KeywordGraph& graph, int i, int j);

// Gaussian draw rounded to nearest, clamped to [1, 128].
int sample_walk_length(const WalkParams& params, Rng& rng);

// One transition step from v; pre: v has out-edges.
int sample_next_vertex(const KeywordGraph& graph, int v, Rng& rng);

// Random walk of sampled length from start; terminates early at sinks.
// Returns the induced subgraph of all traversed vertices.
Subgraph sample_walk(const KeywordGraph& graph, int start,
                     const WalkParams& params, Rng& rng);

// Diagnostics: vertex table (word, class, index) and edge list
// (src_word, dst_word, weight) as TSV.
void dump_graph(const KeywordGraph& graph, const std::string& vertices_path,
                const std::string& edges_path);

}  // namespace keygraph
