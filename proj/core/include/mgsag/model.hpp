// Full MGSAG model: hierarchical encoder -> FGSAG + CGSAG -> pair classifier,
// with ablation switches that drop either graph (substituting the raw clause
// representation to keep dimensions fixed) and keyword feature options.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgsag/context.hpp"
#include "mgsag/corpus.hpp"
#include "mgsag/embedding.hpp"
#include "mgsag/encoder.hpp"
#include "mgsag/keywords.hpp"
#include "mgsag/pair_extraction.hpp"
#include "mgsag/param_store.hpp"
#include "mgsag/semantic_graphs.hpp"

namespace mgsag {

struct ModelConfig {
  std::size_t emb_dim = 200;      // d_w == 2 d_h
  std::size_t word_hidden = 200;  // per-direction word-level hidden units
  std::size_t gat_layers = 2;
  bool fgsag_enabled = true;
  bool cgsag_enabled = true;
  FgsagNorm fgsag_norm = FgsagNorm::OverClauses;
  KeywordMode keyword_mode = KeywordMode::Combined;
  bool random_keyword_features = false;
  double dropout_rate = 0.1;
  double leaky_slope = 0.2;

  EncoderDims encoder_dims() const { return {emb_dim, word_hidden}; }
  void validate() const;
};

class MgsagModel {
 public:
  /// Fresh seeded parameters.
  MgsagModel(const ModelConfig& config, std::uint64_t param_seed);
  /// Adopts a previously dumped store; shapes must match the config.
  MgsagModel(const ModelConfig& config, ParamStore store);

  const ModelConfig& config() const { return config_; }
  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }

  struct Forward {
    ClauseStates encoder;                    // includes v and aux heads
    std::vector<Tensor> vb, vc;              // graph outputs (or substitutes)
    PairPrediction pairs;
    std::vector<std::vector<double>> fgsag_alpha;  // empty when FGSAG off/degraded
    bool fgsag_degraded = false;
  };

  /// Keyword node features for the document under the configured policy.
  std::vector<Tensor> keyword_features(const std::vector<std::string>& keywords,
                                       EmbeddingTable& embeddings) const;

  /// Encoder only: fused clause representations plus aux heads.
  ClauseStates encode(const Document& doc, EmbeddingTable& embeddings,
                      const ForwardContext& ctx) const;

  struct GraphsOut {
    std::vector<Tensor> vb, vc;
    std::vector<std::vector<double>> fgsag_alpha;
    bool fgsag_degraded = false;
  };

  /// Graph stages as a function of per-clause features; permuting
  /// clause_feats permutes vb/vc identically (bitwise, eval mode).
  GraphsOut graphs_forward(const std::vector<Tensor>& clause_feats,
                           const std::vector<Tensor>& keyword_feats,
                           const ForwardContext& ctx) const;

  PairPrediction classify(const std::vector<Tensor>& vb, const std::vector<Tensor>& vc,
                          const ForwardContext& ctx) const;

  Forward forward(const Document& doc, EmbeddingTable& embeddings,
                  const KeywordSet& keywords, const ForwardContext& ctx) const;

  /// Eval-mode prediction.
  ExtractionResult predict(const Document& doc, EmbeddingTable& embeddings,
                           const KeywordSet& keywords) const;

  /// Sorted keyword node order used for graph construction and export.
  std::vector<std::string> keyword_nodes(const KeywordSet& keywords) const;

 private:
  void register_all(std::uint64_t param_seed);
  void fetch_all();

  ModelConfig config_;
  ParamStore store_;
  EncoderParams encoder_;
  std::optional<FgsagParams> fgsag_;
  std::optional<CgsagParams> cgsag_;
  PairParams pair_;
};

enum class LossMode { PairOnly, Full };

std::string to_string(LossMode mode);
LossMode loss_mode_from_string(const std::string& s);

/// L = L_pair (+ L_emo + L_cau in Full mode); each term is a mean
/// cross-entropy over its candidates (|D|^2 pairs, |D| clauses).
Tensor total_loss(const MgsagModel::Forward& forward, const Document& doc,
                  LossMode mode);

}  // namespace mgsag
