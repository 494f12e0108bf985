#include <benchmark/benchmark.h>

#include <random>

#include "mgsag/rng.hpp"
#include "mgsag/synthetic.hpp"
#include "mgsag/textrank.hpp"
#include "mgsag/train.hpp"

namespace {

using namespace mgsag;

TrainConfig bench_config(std::size_t emb_dim) {
  TrainConfig config;
  config.model.emb_dim = emb_dim;
  config.model.word_hidden = emb_dim / 2;
  config.model.dropout_rate = 0.0;
  config.seed = 7;
  return config;
}

struct BenchData {
  std::vector<Document> docs;
  std::vector<KeywordSet> sets;
  EmbeddingTable embeddings;

  BenchData(std::size_t n_docs, const TrainConfig& config)
      : embeddings(config.model.emb_dim, 3) {
    SyntheticConfig sc;
    sc.n_docs = n_docs;
    sc.seed = 7;
    docs = generate_synthetic_corpus(sc);
    sets = build_keyword_sets(docs, {synthetic_emotion_token()}, {}, config);
  }
};

void BM_ForwardEval(benchmark::State& state) {
  const auto config = bench_config(static_cast<std::size_t>(state.range(0)));
  BenchData data(4, config);
  MgsagModel model(config.model, 1);
  ForwardContext ctx;
  for (auto _ : state) {
    for (std::size_t d = 0; d < data.docs.size(); ++d) {
      auto fwd = model.forward(data.docs[d], data.embeddings, data.sets[d], ctx);
      benchmark::DoNotOptimize(fwd.pairs.labels);
    }
  }
  state.SetItemsProcessed(state.iterations() * data.docs.size());
}
BENCHMARK(BM_ForwardEval)->Arg(8)->Arg(16)->Arg(32);

void BM_TrainStep(benchmark::State& state) {
  const auto config = bench_config(static_cast<std::size_t>(state.range(0)));
  BenchData data(1, config);
  MgsagModel model(config.model, 1);
  AdamState adam(AdamConfig{1e-3});
  for (auto _ : state) {
    model.params().zero_grad();
    ForwardContext ctx;
    auto fwd = model.forward(data.docs[0], data.embeddings, data.sets[0], ctx);
    Tensor loss = total_loss(fwd, data.docs[0], LossMode::Full);
    backward(loss);
    adam.step(model.params());
    benchmark::DoNotOptimize(loss);
  }
}
BENCHMARK(BM_TrainStep)->Arg(8)->Arg(16)->Arg(32);

void BM_TextRank(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> weight(0.5, 3.0);
  CooccurrenceGraph graph;
  for (std::size_t i = 0; i < n; ++i) {
    graph.nodes.push_back("t" + std::to_string(i));
    graph.node_index[graph.nodes.back()] = i;
    graph.adjacency.emplace_back();
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng() % 4 == 0) {
        const double w = weight(rng);
        graph.adjacency[i][j] = w;
        graph.adjacency[j][i] = w;
      }
  TextRankConfig config;
  for (auto _ : state) {
    auto scores = textrank_scores(graph, config);
    benchmark::DoNotOptimize(scores);
  }
}
BENCHMARK(BM_TextRank)->Arg(20)->Arg(100)->Arg(400);

void BM_AdamStep(benchmark::State& state) {
  ParamStore store(1);
  store.add_matrix("a", 64, 64);
  store.add_matrix("b", 64, 64);
  store.zero_grad();
  for (auto& [name, t] : store)
    for (auto& g : t.grad()) g = 0.01;
  AdamState adam;
  for (auto _ : state) {
    adam.step(store);
    for (auto& [name, t] : store)
      for (auto& g : t.grad()) g = 0.01;
  }
}
BENCHMARK(BM_AdamStep);

}  // namespace

BENCHMARK_MAIN();
