#include "mgsag/pair_extraction.hpp"

#include <nlohmann/json.hpp>

namespace mgsag {

PairParams register_pair_classifier(ParamStore& store, std::size_t clause_dim) {
  PairParams p;
  p.W = store.add_matrix("pair.W_p", 2, 4 * clause_dim);
  p.b = store.add_vector("pair.b_p", 2);
  return p;
}

PairParams fetch_pair_classifier(ParamStore& store) {
  PairParams p;
  p.W = store.at("pair.W_p");
  p.b = store.at("pair.b_p");
  return p;
}

std::vector<std::vector<Tensor>> pair_representations(const std::vector<Tensor>& vb,
                                                      const std::vector<Tensor>& vc) {
  if (vb.size() != vc.size())
    throw ShapeError("pair_representations: vb and vc clause counts differ");
  const std::size_t n = vb.size();
  std::vector<Tensor> v_hat;
  v_hat.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v_hat.push_back(concat(vb[i], vc[i]));

  std::vector<std::vector<Tensor>> reps(n);
  for (std::size_t i = 0; i < n; ++i) {
    reps[i].reserve(n);
    for (std::size_t j = 0; j < n; ++j) reps[i].push_back(concat(v_hat[i], v_hat[j]));
  }
  return reps;
}

PairPrediction classify_pairs(const std::vector<std::vector<Tensor>>& pair_reps,
                              const PairParams& params, const ForwardContext& ctx) {
  PairPrediction pred;
  pred.n = pair_reps.size();
  pred.probs.resize(pred.n);
  pred.labels.assign(pred.n, std::vector<int>(pred.n, 0));
  for (std::size_t i = 0; i < pred.n; ++i) {
    pred.probs[i].reserve(pred.n);
    for (std::size_t j = 0; j < pred.n; ++j) {
      Tensor p = softmax(add(matmul(params.W, pair_reps[i][j]), params.b));
      ctx.probe(p.values());
      // Strict inequality: an exact 0.5/0.5 tie stays "not a pair".
      pred.labels[i][j] = p.value(1) > p.value(0) ? 1 : 0;
      pred.probs[i].push_back(std::move(p));
    }
  }
  return pred;
}

std::set<std::size_t> derive_emotions(const std::vector<std::vector<int>>& labels) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int row_sum = 0;
    for (int x : labels[i]) row_sum += x;
    if (row_sum > 0) out.insert(i + 1);
  }
  return out;
}

std::set<std::size_t> derive_causes(const std::vector<std::vector<int>>& labels) {
  std::set<std::size_t> out;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    int col_sum = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) col_sum += labels[i][j];
    if (col_sum > 0) out.insert(j + 1);
  }
  return out;
}

bool ExtractionResult::consistent() const {
  std::set<std::size_t> row_proj, col_proj;
  for (const auto& [e, c] : pairs) {
    row_proj.insert(e);
    col_proj.insert(c);
  }
  return row_proj == emotions && col_proj == causes;
}

ExtractionResult extraction_result(const PairPrediction& prediction) {
  ExtractionResult r;
  for (std::size_t i = 0; i < prediction.n; ++i)
    for (std::size_t j = 0; j < prediction.n; ++j)
      if (prediction.labels[i][j] == 1) r.pairs.emplace(i + 1, j + 1);
  r.emotions = derive_emotions(prediction.labels);
  r.causes = derive_causes(prediction.labels);
  return r;
}

std::string prediction_to_json(const std::string& doc_id, const ExtractionResult& r) {
  nlohmann::json j;
  j["id"] = doc_id;
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [e, c] : r.pairs) pairs.push_back({e, c});
  j["pairs"] = pairs;
  j["emotions"] = r.emotions;
  j["causes"] = r.causes;
  return j.dump();
}

}  // namespace mgsag
