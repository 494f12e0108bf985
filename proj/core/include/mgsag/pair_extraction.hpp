// Candidate pair construction over the full |D| x |D| Cartesian product,
// pair classification, and clause-level emotion/cause derivation from the
// predicted pair matrix. No distance or window filtering anywhere.

#pragma once

#include <set>
#include <vector>

#include "mgsag/context.hpp"
#include "mgsag/corpus.hpp"
#include "mgsag/param_store.hpp"
#include "mgsag/tensor.hpp"

namespace mgsag {

struct PairParams {
  Tensor W;  // [2 x 4 d_w]
  Tensor b;  // [2]
};

PairParams register_pair_classifier(ParamStore& store, std::size_t clause_dim);
PairParams fetch_pair_classifier(ParamStore& store);

/// v_hat_i = [vb_i; vc_i]; pair rep v^p_ij = [v_hat_i; v_hat_j] for every
/// ordered (i, j), i = j included.
std::vector<std::vector<Tensor>> pair_representations(const std::vector<Tensor>& vb,
                                                      const std::vector<Tensor>& vc);

struct PairPrediction {
  std::size_t n = 0;
  std::vector<std::vector<Tensor>> probs;  // [n][n], each a 2-class simplex
  std::vector<std::vector<int>> labels;    // argmax; exact tie -> 0 (not a pair)

  bool is_pair(std::size_t i, std::size_t j) const { return labels[i][j] == 1; }
};

PairPrediction classify_pairs(const std::vector<std::vector<Tensor>>& pair_reps,
                              const PairParams& params, const ForwardContext& ctx);

/// Clause i is an emotion iff row i of the label matrix has any 1.
std::set<std::size_t> derive_emotions(const std::vector<std::vector<int>>& labels);
/// Clause j is a cause iff column j of the label matrix has any 1.
std::set<std::size_t> derive_causes(const std::vector<std::vector<int>>& labels);

struct ExtractionResult {
  std::set<GoldPair> pairs;          // 1-based (emotion, cause)
  std::set<std::size_t> emotions;    // 1-based clause indices
  std::set<std::size_t> causes;

  /// Emotions/causes must equal the row/column projections of pairs.
  bool consistent() const;
};

ExtractionResult extraction_result(const PairPrediction& prediction);

/// {"id", "pairs", "emotions", "causes"} JSON, 1-based indices.
std::string prediction_to_json(const std::string& doc_id, const ExtractionResult& r);

}  // namespace mgsag
