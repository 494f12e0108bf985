#include "mgsag/model.hpp"

#include <random>

#include "mgsag/rng.hpp"

namespace mgsag {

void ModelConfig::validate() const {
  if (emb_dim == 0 || emb_dim % 2 != 0)
    throw DataError("model config: emb_dim must be a positive even number (d_w = 2 d_h)");
  if (word_hidden == 0) throw DataError("model config: word_hidden must be positive");
  if (gat_layers == 0 && cgsag_enabled)
    throw DataError("model config: gat_layers must be positive when CGSAG is enabled");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0)
    throw DataError("model config: dropout_rate must be in [0, 1)");
}

MgsagModel::MgsagModel(const ModelConfig& config, std::uint64_t param_seed)
    : config_(config), store_(param_seed) {
  config_.validate();
  register_all(param_seed);
}

MgsagModel::MgsagModel(const ModelConfig& config, ParamStore store)
    : config_(config), store_(std::move(store)) {
  config_.validate();
  fetch_all();
}

void MgsagModel::register_all(std::uint64_t) {
  encoder_ = register_encoder(store_, config_.encoder_dims());
  if (config_.fgsag_enabled) fgsag_ = register_fgsag(store_, config_.emb_dim);
  if (config_.cgsag_enabled)
    cgsag_ = register_cgsag(store_, config_.emb_dim, config_.gat_layers,
                            config_.leaky_slope);
  pair_ = register_pair_classifier(store_, config_.emb_dim);
}

void MgsagModel::fetch_all() {
  encoder_ = fetch_encoder(store_, config_.encoder_dims());
  if (config_.fgsag_enabled) fgsag_ = fetch_fgsag(store_);
  if (config_.cgsag_enabled)
    cgsag_ = fetch_cgsag(store_, config_.gat_layers, config_.leaky_slope);
  pair_ = fetch_pair_classifier(store_);
}

std::vector<std::string> MgsagModel::keyword_nodes(const KeywordSet& keywords) const {
  const auto combined = keywords.combined();
  return {combined.begin(), combined.end()};  // lexicographic, order-stable
}

std::vector<Tensor> MgsagModel::keyword_features(
    const std::vector<std::string>& keywords, EmbeddingTable& embeddings) const {
  std::vector<Tensor> feats;
  feats.reserve(keywords.size());
  for (const auto& token : keywords) {
    if (config_.random_keyword_features) {
      std::mt19937_64 rng(split_seed(store_.rng_seed() ^ 0x5757u, fnv1a(token)));
      std::uniform_real_distribution<double> dist(-0.1, 0.1);
      std::vector<double> vec(config_.emb_dim);
      for (double& v : vec) v = dist(rng);
      feats.push_back(Tensor::vector(std::move(vec)));
    } else {
      feats.push_back(Tensor::vector(embeddings.lookup(token)));
    }
  }
  return feats;
}

ClauseStates MgsagModel::encode(const Document& doc, EmbeddingTable& embeddings,
                                const ForwardContext& ctx) const {
  if (doc.clauses.empty()) throw DataError("document '" + doc.id + "' has no clauses");
  if (embeddings.dimension() != config_.emb_dim)
    throw DataError("embedding dimension " + std::to_string(embeddings.dimension()) +
                    " does not match model emb_dim " + std::to_string(config_.emb_dim));
  std::vector<std::vector<Tensor>> clause_tokens;
  clause_tokens.reserve(doc.clauses.size());
  for (const auto& clause : doc.clauses) {
    if (clause.tokens.empty())
      throw DataError("document '" + doc.id + "': clause " + std::to_string(clause.index) +
                      " has no tokens");
    std::vector<Tensor> tokens;
    tokens.reserve(clause.tokens.size());
    for (const auto& token : clause.tokens)
      tokens.push_back(Tensor::vector(embeddings.lookup(token)));
    clause_tokens.push_back(std::move(tokens));
  }
  return encode_document(encoder_, clause_tokens, ctx);
}

MgsagModel::GraphsOut MgsagModel::graphs_forward(
    const std::vector<Tensor>& clause_feats, const std::vector<Tensor>& keyword_feats,
    const ForwardContext& ctx) const {
  GraphsOut out;
  if (config_.fgsag_enabled) {
    auto fg = fgsag_forward(clause_feats, keyword_feats, *fgsag_, config_.fgsag_norm,
                            config_.dropout_rate, ctx);
    out.vb = std::move(fg.vb);
    out.fgsag_alpha = std::move(fg.alpha);
    out.fgsag_degraded = fg.degraded;
  } else {
    out.vb = clause_feats;  // ablation: substitute the raw representation
  }
  if (config_.cgsag_enabled) {
    out.vc = cgsag_forward(clause_feats, *cgsag_, config_.dropout_rate, ctx);
  } else {
    out.vc = clause_feats;
  }
  return out;
}

PairPrediction MgsagModel::classify(const std::vector<Tensor>& vb,
                                    const std::vector<Tensor>& vc,
                                    const ForwardContext& ctx) const {
  return classify_pairs(pair_representations(vb, vc), pair_, ctx);
}

MgsagModel::Forward MgsagModel::forward(const Document& doc, EmbeddingTable& embeddings,
                                        const KeywordSet& keywords,
                                        const ForwardContext& ctx) const {
  if (ctx.training && config_.dropout_rate > 0.0 && ctx.rng == nullptr)
    throw NumericError("forward: training with dropout requires an rng");
  Forward fwd;
  fwd.encoder = encode(doc, embeddings, ctx);
  auto keyword_feats = keyword_features(keyword_nodes(keywords), embeddings);
  auto graphs = graphs_forward(fwd.encoder.v, keyword_feats, ctx);
  fwd.vb = std::move(graphs.vb);
  fwd.vc = std::move(graphs.vc);
  fwd.fgsag_alpha = std::move(graphs.fgsag_alpha);
  fwd.fgsag_degraded = graphs.fgsag_degraded;
  fwd.pairs = classify(fwd.vb, fwd.vc, ctx);
  return fwd;
}

ExtractionResult MgsagModel::predict(const Document& doc, EmbeddingTable& embeddings,
                                     const KeywordSet& keywords) const {
  ForwardContext ctx;  // eval mode
  return extraction_result(forward(doc, embeddings, keywords, ctx).pairs);
}

std::string to_string(LossMode mode) {
  return mode == LossMode::PairOnly ? "pair" : "full";
}

LossMode loss_mode_from_string(const std::string& s) {
  if (s == "pair") return LossMode::PairOnly;
  if (s == "full") return LossMode::Full;
  throw DataError("unknown loss mode '" + s + "' (expected pair or full)");
}

Tensor total_loss(const MgsagModel::Forward& forward, const Document& doc,
                  LossMode mode) {
  const std::size_t n = doc.clauses.size();
  if (forward.pairs.n != n)
    throw ShapeError("total_loss: prediction size does not match document");

  std::vector<Tensor> pair_terms;
  pair_terms.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t gold = doc.gold_pairs.count({i + 1, j + 1}) ? 1 : 0;
      pair_terms.push_back(cross_entropy(forward.pairs.probs[i][j], gold));
    }
  Tensor loss = mean(stack_scalars(pair_terms));

  if (mode == LossMode::Full) {
    std::vector<Tensor> emo_terms, cau_terms;
    emo_terms.reserve(n);
    cau_terms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      emo_terms.push_back(cross_entropy(forward.encoder.y_emotion[i],
                                        doc.clauses[i].is_emotion ? 1 : 0));
      cau_terms.push_back(cross_entropy(forward.encoder.y_cause[i],
                                        doc.clauses[i].is_cause ? 1 : 0));
    }
    loss = add(loss, add(mean(stack_scalars(emo_terms)), mean(stack_scalars(cau_terms))));
  }
  return loss;
}

}  // namespace mgsag
