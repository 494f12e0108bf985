// TextRank keyword ranking: weighted PageRank over a token co-occurrence
// graph built from sliding windows inside each clause.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mgsag/corpus.hpp"

namespace mgsag {

struct TextRankConfig {
  std::size_t window = 2;  // tokens at distance < window co-occur
  double damping = 0.85;
  double tolerance = 1e-6;
  std::size_t max_iterations = 100;
  double keyword_ratio = 1.0 / 3.0;  // fraction of candidates kept
};

/// Undirected weighted co-occurrence graph. Node order is first occurrence
/// in the document; weights are symmetric and self-edges are dropped.
struct CooccurrenceGraph {
  std::vector<std::string> nodes;
  std::map<std::string, std::size_t> node_index;
  std::vector<std::map<std::size_t, double>> adjacency;  // node -> {node: weight}

  std::size_t size() const { return nodes.size(); }
};

/// Candidates are all document tokens minus stopwords. Windows never cross
/// clause boundaries.
CooccurrenceGraph build_cooccurrence_graph(const Document& doc,
                                           const std::set<std::string>& stopwords,
                                           std::size_t window);

/// Iterates s(v) = (1-d) + d * sum_u w_uv / sum_t w_ut * s(u) until the
/// largest per-node change falls below tolerance or max_iterations is hit.
/// Isolated nodes score (1-d).
std::map<std::string, double> textrank_scores(const CooccurrenceGraph& graph,
                                              const TextRankConfig& config);

/// Top ceil(ratio * |candidates|) tokens by score; ties go to the token that
/// occurs earlier in the document.
std::vector<std::string> select_key_phrases(const CooccurrenceGraph& graph,
                                            const std::map<std::string, double>& scores,
                                            double ratio);

}  // namespace mgsag
