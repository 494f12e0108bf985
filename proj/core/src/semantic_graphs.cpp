#include "mgsag/semantic_graphs.hpp"

#include <nlohmann/json.hpp>

#include "mgsag/corpus.hpp"

namespace mgsag {

std::string to_string(FgsagNorm norm) {
  return norm == FgsagNorm::OverClauses ? "clauses" : "keywords";
}

FgsagNorm fgsag_norm_from_string(const std::string& s) {
  if (s == "clauses") return FgsagNorm::OverClauses;
  if (s == "keywords") return FgsagNorm::OverKeywords;
  throw DataError("unknown fgsag norm '" + s + "' (expected clauses or keywords)");
}

FgsagParams register_fgsag(ParamStore& store, std::size_t dim) {
  FgsagParams p;
  p.W1 = store.add_matrix("fgsag.W1", dim, dim);
  p.W2 = store.add_matrix("fgsag.W2", dim, dim);
  p.W3 = store.add_matrix("fgsag.W3", dim, dim);
  p.w = store.add_matrix("fgsag.w", 1, 2 * dim);
  p.b = store.add_vector("fgsag.b", dim);
  return p;
}

FgsagParams fetch_fgsag(ParamStore& store) {
  FgsagParams p;
  p.W1 = store.at("fgsag.W1");
  p.W2 = store.at("fgsag.W2");
  p.W3 = store.at("fgsag.W3");
  p.w = store.at("fgsag.w");
  p.b = store.at("fgsag.b");
  return p;
}

std::vector<std::vector<double>> FgsagAttention::dense(std::size_t n_clauses,
                                                       std::size_t n_keywords) const {
  std::vector<std::vector<double>> out(n_clauses, std::vector<double>(n_keywords, 0.0));
  for (std::size_t i = 0; i < n_clauses; ++i)
    for (std::size_t j = 0; j < n_keywords; ++j)
      out[i][j] = norm == FgsagNorm::OverClauses ? lanes[j].value(i)
                                                 : lanes[i].value(j);
  return out;
}

FgsagAttention fgsag_attention(const std::vector<Tensor>& clause_feats,
                               const std::vector<Tensor>& keyword_feats,
                               const FgsagParams& params, FgsagNorm norm,
                               const ForwardContext& ctx) {
  FgsagAttention attention;
  attention.norm = norm;
  if (keyword_feats.empty()) return attention;

  const std::size_t n = clause_feats.size();
  const std::size_t m = keyword_feats.size();

  // Score halves can be computed once per node: w^T [W1 v_i; W2 k_j]
  // separates into a clause part and a keyword part.
  std::vector<Tensor> clause_part, keyword_part;
  clause_part.reserve(n);
  keyword_part.reserve(m);
  for (const Tensor& v : clause_feats) clause_part.push_back(matmul(params.W1, v));
  for (const Tensor& k : keyword_feats) keyword_part.push_back(matmul(params.W2, k));

  auto score = [&](std::size_t i, std::size_t j) {
    return matmul(params.w, concat(clause_part[i], keyword_part[j]));
  };

  if (norm == FgsagNorm::OverClauses) {
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Tensor> logits;
      logits.reserve(n);
      for (std::size_t i = 0; i < n; ++i) logits.push_back(score(i, j));
      Tensor lane = softmax(stack_scalars(logits));
      ctx.probe(lane.values());
      attention.lanes.push_back(lane);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Tensor> logits;
      logits.reserve(m);
      for (std::size_t j = 0; j < m; ++j) logits.push_back(score(i, j));
      Tensor lane = softmax(stack_scalars(logits));
      ctx.probe(lane.values());
      attention.lanes.push_back(lane);
    }
  }
  return attention;
}

std::vector<Tensor> fgsag_update(const std::vector<Tensor>& clause_feats,
                                 const FgsagAttention& attention,
                                 const FgsagParams& params) {
  const std::size_t n = clause_feats.size();
  std::vector<Tensor> vb;
  vb.reserve(n);

  if (attention.lanes.empty()) {  // no keywords: residual + bias only
    for (const Tensor& v : clause_feats) vb.push_back(tanh(add(v, params.b)));
    return vb;
  }

  const std::size_t m =
      attention.norm == FgsagNorm::OverClauses ? attention.lanes.size() : attention.lanes[0].size();

  std::vector<Tensor> transformed;
  transformed.reserve(n);
  for (const Tensor& v : clause_feats) transformed.push_back(matmul(params.W3, v));

  // ktilde_j = sum_t alpha_tj W3 v_t; clause-indexed, canonical accumulation.
  std::vector<Tensor> ktilde;
  ktilde.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    Tensor column;
    if (attention.norm == FgsagNorm::OverClauses) {
      column = attention.lanes[j];
    } else {
      std::vector<Tensor> picks;
      picks.reserve(n);
      for (std::size_t i = 0; i < n; ++i) picks.push_back(pick(attention.lanes[i], j));
      column = stack_scalars(picks);
    }
    ktilde.push_back(attend_sum(column, transformed));
  }

  for (std::size_t i = 0; i < n; ++i) {
    Tensor row;
    if (attention.norm == FgsagNorm::OverKeywords) {
      row = attention.lanes[i];
    } else {
      std::vector<Tensor> picks;
      picks.reserve(m);
      for (std::size_t j = 0; j < m; ++j) picks.push_back(pick(attention.lanes[j], i));
      row = stack_scalars(picks);
    }
    Tensor keyword_mix = attend_sum(row, ktilde);
    vb.push_back(tanh(add(add(clause_feats[i], keyword_mix), params.b)));
  }
  return vb;
}

FgsagResult fgsag_forward(const std::vector<Tensor>& clause_feats,
                          const std::vector<Tensor>& keyword_feats,
                          const FgsagParams& params, FgsagNorm norm,
                          double dropout_rate, const ForwardContext& ctx) {
  FgsagResult result;
  auto attention = fgsag_attention(clause_feats, keyword_feats, params, norm, ctx);
  result.vb = fgsag_update(clause_feats, attention, params);
  result.degraded = keyword_feats.empty();
  if (!result.degraded)
    result.alpha = attention.dense(clause_feats.size(), keyword_feats.size());
  if (ctx.training && dropout_rate > 0.0) {
    for (Tensor& t : result.vb) t = dropout(t, dropout_rate, true, *ctx.rng);
  }
  return result;
}

// ---- CGSAG -------------------------------------------------------------------

namespace {

std::string layer_prefix(std::size_t layer) {
  return "cgsag.layer" + std::to_string(layer);
}

}  // namespace

CgsagParams register_cgsag(ParamStore& store, std::size_t dim, std::size_t n_layers,
                           double leaky_slope) {
  CgsagParams p;
  p.leaky_slope = leaky_slope;
  for (std::size_t t = 0; t < n_layers; ++t) {
    GatLayerParams layer;
    layer.W1 = store.add_matrix(layer_prefix(t) + ".W1", dim, dim);
    layer.W2 = store.add_matrix(layer_prefix(t) + ".W2", dim, dim);
    layer.W3 = store.add_matrix(layer_prefix(t) + ".W3", dim, dim);
    layer.w = store.add_matrix(layer_prefix(t) + ".w", 1, 2 * dim);
    layer.b = store.add_vector(layer_prefix(t) + ".b", dim);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

CgsagParams fetch_cgsag(ParamStore& store, std::size_t n_layers, double leaky_slope) {
  CgsagParams p;
  p.leaky_slope = leaky_slope;
  for (std::size_t t = 0; t < n_layers; ++t) {
    GatLayerParams layer;
    layer.W1 = store.at(layer_prefix(t) + ".W1");
    layer.W2 = store.at(layer_prefix(t) + ".W2");
    layer.W3 = store.at(layer_prefix(t) + ".W3");
    layer.w = store.at(layer_prefix(t) + ".w");
    layer.b = store.at(layer_prefix(t) + ".b");
    p.layers.push_back(std::move(layer));
  }
  return p;
}

std::vector<Tensor> gat_layer(const std::vector<Tensor>& v_prev,
                              const GatLayerParams& params, double leaky_slope,
                              const ForwardContext& ctx) {
  const std::size_t n = v_prev.size();
  std::vector<Tensor> self_part, nbr_part, messages;
  self_part.reserve(n);
  nbr_part.reserve(n);
  messages.reserve(n);
  for (const Tensor& v : v_prev) {
    self_part.push_back(matmul(params.W2, v));
    nbr_part.push_back(matmul(params.W3, v));
    messages.push_back(matmul(params.W1, v));
  }

  std::vector<Tensor> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Tensor> logits;
    logits.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      Tensor e = matmul(params.w, tanh(concat(self_part[i], nbr_part[j])));
      logits.push_back(leaky_relu(e, leaky_slope));
    }
    Tensor alpha = softmax(stack_scalars(logits));
    ctx.probe(alpha.values());
    out.push_back(relu(add(attend_sum(alpha, messages), params.b)));
  }
  return out;
}

std::vector<Tensor> cgsag_forward(const std::vector<Tensor>& clause_feats,
                                  const CgsagParams& params, double dropout_rate,
                                  const ForwardContext& ctx) {
  std::vector<Tensor> v = clause_feats;
  for (const auto& layer : params.layers) {
    v = gat_layer(v, layer, params.leaky_slope, ctx);
    if (ctx.training && dropout_rate > 0.0) {
      for (Tensor& t : v) t = dropout(t, dropout_rate, true, *ctx.rng);
    }
  }
  return v;
}

std::string attention_to_json(const std::string& doc_id,
                              const std::vector<std::string>& keywords,
                              const std::vector<std::vector<double>>& alpha) {
  nlohmann::json j;
  j["doc_id"] = doc_id;
  j["keywords"] = keywords;
  j["alpha"] = alpha;
  return j.dump();
}

}  // namespace mgsag
