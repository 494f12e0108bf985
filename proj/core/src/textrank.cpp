#include "mgsag/textrank.hpp"

#include <algorithm>
#include <cmath>

namespace mgsag {

CooccurrenceGraph build_cooccurrence_graph(const Document& doc,
                                           const std::set<std::string>& stopwords,
                                           std::size_t window) {
  if (window < 1) throw DataError("build_cooccurrence_graph: window must be >= 1");
  CooccurrenceGraph graph;
  auto intern = [&graph](const std::string& token) {
    auto it = graph.node_index.find(token);
    if (it != graph.node_index.end()) return it->second;
    const std::size_t idx = graph.nodes.size();
    graph.nodes.push_back(token);
    graph.node_index.emplace(token, idx);
    graph.adjacency.emplace_back();
    return idx;
  };

  for (const auto& clause : doc.clauses) {
    std::vector<std::size_t> seq;
    for (const auto& token : clause.tokens) {
      if (stopwords.count(token)) continue;
      seq.push_back(intern(token));
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
      for (std::size_t j = i + 1; j < seq.size() && j - i < window; ++j) {
        if (seq[i] == seq[j]) continue;  // no self-edges
        graph.adjacency[seq[i]][seq[j]] += 1.0;
        graph.adjacency[seq[j]][seq[i]] += 1.0;
      }
    }
  }
  return graph;
}

std::map<std::string, double> textrank_scores(const CooccurrenceGraph& graph,
                                              const TextRankConfig& config) {
  if (graph.size() == 0) throw DataError("textrank_scores: empty graph");
  const std::size_t n = graph.size();
  const double d = config.damping;

  std::vector<double> weight_sum(n, 0.0);
  for (std::size_t u = 0; u < n; ++u)
    for (const auto& [v, w] : graph.adjacency[u]) weight_sum[u] += w;

  std::vector<double> score(n, 1.0);
  std::vector<double> next(n);
  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    for (std::size_t v = 0; v < n; ++v) {
      double mass = 0.0;
      for (const auto& [u, w] : graph.adjacency[v]) mass += w / weight_sum[u] * score[u];
      next[v] = (1.0 - d) + d * mass;
    }
    double delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) delta = std::max(delta, std::abs(next[v] - score[v]));
    score.swap(next);
    if (delta < config.tolerance) break;
  }

  std::map<std::string, double> out;
  for (std::size_t v = 0; v < n; ++v) out[graph.nodes[v]] = score[v];
  return out;
}

std::vector<std::string> select_key_phrases(const CooccurrenceGraph& graph,
                                            const std::map<std::string, double>& scores,
                                            double ratio) {
  if (ratio <= 0.0 || ratio > 1.0)
    throw DataError("select_key_phrases: ratio must be in (0, 1]");
  if (graph.size() == 0) return {};

  // (node index == first-occurrence rank) breaks score ties.
  std::vector<std::size_t> order(graph.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = scores.at(graph.nodes[a]);
    const double sb = scores.at(graph.nodes[b]);
    if (sa != sb) return sa > sb;
    return a < b;
  });

  const auto keep = static_cast<std::size_t>(
      std::ceil(ratio * static_cast<double>(graph.size())));
  std::vector<std::string> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep && i < order.size(); ++i)
    out.push_back(graph.nodes[order[i]]);
  return out;
}

}  // namespace mgsag
