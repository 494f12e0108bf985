#include "mgsag/encoder.hpp"

#include <algorithm>

namespace mgsag {

LstmParams register_lstm(ParamStore& store, const std::string& prefix,
                         std::size_t input_dim, std::size_t hidden_dim) {
  LstmParams p;
  p.W_i = store.add_matrix(prefix + ".W_i", hidden_dim, input_dim);
  p.W_f = store.add_matrix(prefix + ".W_f", hidden_dim, input_dim);
  p.W_g = store.add_matrix(prefix + ".W_g", hidden_dim, input_dim);
  p.W_o = store.add_matrix(prefix + ".W_o", hidden_dim, input_dim);
  p.U_i = store.add_matrix(prefix + ".U_i", hidden_dim, hidden_dim);
  p.U_f = store.add_matrix(prefix + ".U_f", hidden_dim, hidden_dim);
  p.U_g = store.add_matrix(prefix + ".U_g", hidden_dim, hidden_dim);
  p.U_o = store.add_matrix(prefix + ".U_o", hidden_dim, hidden_dim);
  p.b_i = store.add_vector(prefix + ".b_i", hidden_dim);
  p.b_f = store.add_vector(prefix + ".b_f", hidden_dim, 1.0);
  p.b_g = store.add_vector(prefix + ".b_g", hidden_dim);
  p.b_o = store.add_vector(prefix + ".b_o", hidden_dim);
  return p;
}

LstmParams fetch_lstm(ParamStore& store, const std::string& prefix) {
  LstmParams p;
  p.W_i = store.at(prefix + ".W_i");
  p.W_f = store.at(prefix + ".W_f");
  p.W_g = store.at(prefix + ".W_g");
  p.W_o = store.at(prefix + ".W_o");
  p.U_i = store.at(prefix + ".U_i");
  p.U_f = store.at(prefix + ".U_f");
  p.U_g = store.at(prefix + ".U_g");
  p.U_o = store.at(prefix + ".U_o");
  p.b_i = store.at(prefix + ".b_i");
  p.b_f = store.at(prefix + ".b_f");
  p.b_g = store.at(prefix + ".b_g");
  p.b_o = store.at(prefix + ".b_o");
  return p;
}

std::vector<Tensor> lstm_forward(const LstmParams& params,
                                 const std::vector<Tensor>& inputs) {
  const std::size_t hidden = params.hidden();
  Tensor h = Tensor::zeros({hidden});
  Tensor c = Tensor::zeros({hidden});
  std::vector<Tensor> states;
  states.reserve(inputs.size());
  for (const Tensor& x : inputs) {
    Tensor i = sigmoid(add(add(matmul(params.W_i, x), matmul(params.U_i, h)), params.b_i));
    Tensor f = sigmoid(add(add(matmul(params.W_f, x), matmul(params.U_f, h)), params.b_f));
    Tensor g = tanh(add(add(matmul(params.W_g, x), matmul(params.U_g, h)), params.b_g));
    Tensor o = sigmoid(add(add(matmul(params.W_o, x), matmul(params.U_o, h)), params.b_o));
    c = add(mul(f, c), mul(i, g));
    h = mul(o, tanh(c));
    states.push_back(h);
  }
  return states;
}

std::vector<Tensor> bilstm_forward(const LstmParams& fwd, const LstmParams& bwd,
                                   const std::vector<Tensor>& inputs) {
  auto forward_states = lstm_forward(fwd, inputs);
  std::vector<Tensor> reversed(inputs.rbegin(), inputs.rend());
  auto backward_states = lstm_forward(bwd, reversed);
  std::reverse(backward_states.begin(), backward_states.end());
  std::vector<Tensor> out;
  out.reserve(inputs.size());
  for (std::size_t t = 0; t < inputs.size(); ++t)
    out.push_back(concat(forward_states[t], backward_states[t]));
  return out;
}

EncoderParams register_encoder(ParamStore& store, const EncoderDims& dims) {
  if (dims.emb_dim % 2 != 0)
    throw ShapeError("encoder: emb_dim must be even (emb_dim == 2 * clause_hidden)");
  EncoderParams p;
  p.dims = dims;
  p.word_fwd = register_lstm(store, "encoder.word.fwd", dims.emb_dim, dims.word_hidden);
  p.word_bwd = register_lstm(store, "encoder.word.bwd", dims.emb_dim, dims.word_hidden);
  // Attention scorer over one bidirectional state; bias-free.
  p.word_att = store.add_matrix("encoder.word.att", 1, 2 * dims.word_hidden);
  const std::size_t clause_in = 2 * dims.word_hidden;
  const std::size_t d_h = dims.clause_hidden();
  p.emo_fwd = register_lstm(store, "encoder.emo.fwd", clause_in, d_h);
  p.emo_bwd = register_lstm(store, "encoder.emo.bwd", clause_in, d_h);
  p.cau_fwd = register_lstm(store, "encoder.cau.fwd", clause_in, d_h);
  p.cau_bwd = register_lstm(store, "encoder.cau.bwd", clause_in, d_h);
  p.gate_w = store.add_matrix("encoder.gate.W_g", 1, 2 * d_h);
  p.gate_b = store.add_scalar("encoder.gate.b_g");
  p.aux_emo_W = store.add_matrix("encoder.aux.W_e", 2, 2 * d_h);
  p.aux_emo_b = store.add_vector("encoder.aux.b_e", 2);
  p.aux_cau_W = store.add_matrix("encoder.aux.W_c", 2, 2 * d_h);
  p.aux_cau_b = store.add_vector("encoder.aux.b_c", 2);
  return p;
}

EncoderParams fetch_encoder(ParamStore& store, const EncoderDims& dims) {
  EncoderParams p;
  p.dims = dims;
  p.word_fwd = fetch_lstm(store, "encoder.word.fwd");
  p.word_bwd = fetch_lstm(store, "encoder.word.bwd");
  p.word_att = store.at("encoder.word.att");
  p.emo_fwd = fetch_lstm(store, "encoder.emo.fwd");
  p.emo_bwd = fetch_lstm(store, "encoder.emo.bwd");
  p.cau_fwd = fetch_lstm(store, "encoder.cau.fwd");
  p.cau_bwd = fetch_lstm(store, "encoder.cau.bwd");
  p.gate_w = store.at("encoder.gate.W_g");
  p.gate_b = store.at("encoder.gate.b_g");
  p.aux_emo_W = store.at("encoder.aux.W_e");
  p.aux_emo_b = store.at("encoder.aux.b_e");
  p.aux_cau_W = store.at("encoder.aux.W_c");
  p.aux_cau_b = store.at("encoder.aux.b_c");
  return p;
}

Tensor encode_words(const EncoderParams& params,
                    const std::vector<Tensor>& token_embeddings,
                    const ForwardContext& ctx) {
  if (token_embeddings.empty())
    throw ShapeError("encode_words: clause has no tokens");
  auto states = bilstm_forward(params.word_fwd, params.word_bwd, token_embeddings);
  std::vector<Tensor> logits;
  logits.reserve(states.size());
  for (const Tensor& s : states) logits.push_back(matmul(params.word_att, s));
  Tensor alpha = softmax(stack_scalars(logits));
  ctx.probe(alpha.values());
  return attend_sum(alpha, states);
}

std::pair<std::vector<Tensor>, std::vector<Tensor>> encode_clauses(
    const EncoderParams& params, const std::vector<Tensor>& h) {
  if (h.empty()) throw ShapeError("encode_clauses: empty document");
  return {bilstm_forward(params.emo_fwd, params.emo_bwd, h),
          bilstm_forward(params.cau_fwd, params.cau_bwd, h)};
}

std::pair<Tensor, Tensor> gate_fuse(const EncoderParams& params, const Tensor& u_emotion,
                                    const Tensor& u_cause) {
  Tensor g = sigmoid(add(matmul(params.gate_w, u_emotion), params.gate_b));
  Tensor one_minus_g = sub(Tensor::scalar(1.0), g);
  Tensor v = add(smul(g, u_cause), smul(one_minus_g, u_emotion));
  return {g, v};
}

std::pair<Tensor, Tensor> aux_predict(const EncoderParams& params,
                                      const Tensor& u_emotion, const Tensor& u_cause,
                                      const ForwardContext& ctx) {
  Tensor ye = softmax(add(matmul(params.aux_emo_W, u_emotion), params.aux_emo_b));
  Tensor yc = softmax(add(matmul(params.aux_cau_W, u_cause), params.aux_cau_b));
  ctx.probe(ye.values());
  ctx.probe(yc.values());
  return {ye, yc};
}

ClauseStates encode_document(const EncoderParams& params,
                             const std::vector<std::vector<Tensor>>& clause_tokens,
                             const ForwardContext& ctx) {
  ClauseStates states;
  states.h.reserve(clause_tokens.size());
  for (const auto& tokens : clause_tokens)
    states.h.push_back(encode_words(params, tokens, ctx));
  std::tie(states.u_emotion, states.u_cause) = encode_clauses(params, states.h);
  for (std::size_t i = 0; i < states.h.size(); ++i) {
    auto [g, v] = gate_fuse(params, states.u_emotion[i], states.u_cause[i]);
    states.gate.push_back(g);
    states.v.push_back(v);
    auto [ye, yc] = aux_predict(params, states.u_emotion[i], states.u_cause[i], ctx);
    states.y_emotion.push_back(ye);
    states.y_cause.push_back(yc);
  }
  return states;
}

}  // namespace mgsag
