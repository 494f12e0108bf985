// FGSAG: dense clause-keyword bipartite graph attention yielding fine-grained
// semantic enhanced clause vectors. CGSAG: fully connected clause graph with
// self-loops and stacked graph-attention layers yielding coarse-grained
// enhanced clause vectors.
//
// Neither graph carries positional information: permuting the clause feature
// list permutes both outputs identically, bit for bit (reductions over
// clause-indexed collections use canonical-order accumulation).

#pragma once

#include <string>
#include <vector>

#include "mgsag/context.hpp"
#include "mgsag/param_store.hpp"
#include "mgsag/tensor.hpp"

namespace mgsag {

/// Normalization direction of the bipartite attention: per keyword over
/// clauses (as printed), or per clause over keywords.
enum class FgsagNorm { OverClauses, OverKeywords };

std::string to_string(FgsagNorm norm);
FgsagNorm fgsag_norm_from_string(const std::string& s);

struct FgsagParams {
  Tensor W1, W2, W3;  // [d_w x d_w]
  Tensor w;           // [2 d_w]
  Tensor b;           // [d_w]
};

FgsagParams register_fgsag(ParamStore& store, std::size_t dim);
FgsagParams fetch_fgsag(ParamStore& store);

/// Attention lanes. With OverClauses there is one simplex of length |D| per
/// keyword (column-normalized, as printed); with OverKeywords one simplex of
/// length m per clause. alpha(i, j) addresses clause i / keyword j either way.
struct FgsagAttention {
  FgsagNorm norm = FgsagNorm::OverClauses;
  std::vector<Tensor> lanes;

  Tensor alpha(std::size_t clause, std::size_t keyword) const {
    return norm == FgsagNorm::OverClauses ? pick(lanes[keyword], clause)
                                          : pick(lanes[clause], keyword);
  }
  /// Dense |D| x m matrix of attention values (for export / tests).
  std::vector<std::vector<double>> dense(std::size_t n_clauses,
                                         std::size_t n_keywords) const;
};

FgsagAttention fgsag_attention(const std::vector<Tensor>& clause_feats,
                               const std::vector<Tensor>& keyword_feats,
                               const FgsagParams& params, FgsagNorm norm,
                               const ForwardContext& ctx);

/// v^b_i = tanh(v_i + sum_j alpha_ij * ktilde_j + b), where
/// ktilde_j = sum_t alpha_tj W3 v_t. With no keywords this degrades to
/// tanh(v_i + b).
std::vector<Tensor> fgsag_update(const std::vector<Tensor>& clause_feats,
                                 const FgsagAttention& attention,
                                 const FgsagParams& params);

struct FgsagResult {
  std::vector<Tensor> vb;
  std::vector<std::vector<double>> alpha;  // [|D| x m] for export
  bool degraded = false;                   // empty keyword set
};

/// Attention + update + per-layer dropout.
FgsagResult fgsag_forward(const std::vector<Tensor>& clause_feats,
                          const std::vector<Tensor>& keyword_feats,
                          const FgsagParams& params, FgsagNorm norm,
                          double dropout_rate, const ForwardContext& ctx);

struct GatLayerParams {
  Tensor W1, W2, W3;  // [d_w x d_w]
  Tensor w;           // [2 d_w]
  Tensor b;           // [d_w]
};

struct CgsagParams {
  std::vector<GatLayerParams> layers;  // stacked, T = layers.size()
  double leaky_slope = 0.2;
};

CgsagParams register_cgsag(ParamStore& store, std::size_t dim, std::size_t n_layers,
                           double leaky_slope = 0.2);
CgsagParams fetch_cgsag(ParamStore& store, std::size_t n_layers,
                        double leaky_slope = 0.2);

/// One graph-attention layer over the fully connected clause graph
/// (self-loops included): scores e_ij = w^T tanh([W2 v_i; W3 v_j]),
/// row softmax of LeakyReLU(e_ij), update ReLU(sum_j a_ij W1 v_j + b).
std::vector<Tensor> gat_layer(const std::vector<Tensor>& v_prev,
                              const GatLayerParams& params, double leaky_slope,
                              const ForwardContext& ctx);

/// Stacked layers with per-layer dropout; v^(0) is the input.
std::vector<Tensor> cgsag_forward(const std::vector<Tensor>& clause_feats,
                                  const CgsagParams& params, double dropout_rate,
                                  const ForwardContext& ctx);

/// Bipartite attention export: {"doc_id", "keywords", "alpha"} JSON.
std::string attention_to_json(const std::string& doc_id,
                              const std::vector<std::string>& keywords,
                              const std::vector<std::vector<double>>& alpha);

}  // namespace mgsag
