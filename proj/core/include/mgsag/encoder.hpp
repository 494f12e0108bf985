// Hierarchical document encoder: word-level BiLSTM with attention pooling,
// two clause-level BiLSTMs producing emotion- and cause-specific clause
// representations, a gate fusing them, and two auxiliary prediction heads.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mgsag/context.hpp"
#include "mgsag/param_store.hpp"
#include "mgsag/tensor.hpp"

namespace mgsag {

/// One LSTM direction. Gates are kept as separate matrices so the forward
/// pass is plain matmul/add; forget bias starts at 1.
struct LstmParams {
  Tensor W_i, W_f, W_g, W_o;  // input weights   [hidden x input]
  Tensor U_i, U_f, U_g, U_o;  // recurrent weights [hidden x hidden]
  Tensor b_i, b_f, b_g, b_o;  // biases [hidden]

  std::size_t hidden() const { return b_i.size(); }
};

LstmParams register_lstm(ParamStore& store, const std::string& prefix,
                         std::size_t input_dim, std::size_t hidden_dim);
LstmParams fetch_lstm(ParamStore& store, const std::string& prefix);

/// Hidden states for every step, in input order.
std::vector<Tensor> lstm_forward(const LstmParams& params,
                                 const std::vector<Tensor>& inputs);

/// Concatenated [forward; backward] state per step.
std::vector<Tensor> bilstm_forward(const LstmParams& fwd, const LstmParams& bwd,
                                   const std::vector<Tensor>& inputs);

struct EncoderDims {
  std::size_t emb_dim = 200;      // d_w; equals 2 * clause_hidden
  std::size_t word_hidden = 200;  // per-direction word-level hidden units

  std::size_t clause_hidden() const { return emb_dim / 2; }  // d_h
  std::size_t clause_dim() const { return emb_dim; }         // 2 * d_h
};

struct EncoderParams {
  EncoderDims dims;
  LstmParams word_fwd, word_bwd;
  Tensor word_att;  // [1 x 2 * word_hidden], bias-free attention scorer
  LstmParams emo_fwd, emo_bwd, cau_fwd, cau_bwd;
  Tensor gate_w;  // [2 * clause_hidden]
  Tensor gate_b;  // scalar
  Tensor aux_emo_W, aux_cau_W;  // [2 x 2 * clause_hidden] two-class heads
  Tensor aux_emo_b, aux_cau_b;  // [2]
};

EncoderParams register_encoder(ParamStore& store, const EncoderDims& dims);
EncoderParams fetch_encoder(ParamStore& store, const EncoderDims& dims);

/// Per-clause states produced by the encoder.
struct ClauseStates {
  std::vector<Tensor> h;                    // attention-pooled word states
  std::vector<Tensor> u_emotion, u_cause;   // clause-level representations
  std::vector<Tensor> gate;                 // scalar g_i in (0,1)
  std::vector<Tensor> v;                    // gate-fused clause representation
  std::vector<Tensor> y_emotion, y_cause;   // 2-class simplex rows
};

/// Attention-pooled clause state over one clause's token embeddings.
Tensor encode_words(const EncoderParams& params,
                    const std::vector<Tensor>& token_embeddings,
                    const ForwardContext& ctx);

/// Emotion-specific and cause-specific sequences over the clause states.
std::pair<std::vector<Tensor>, std::vector<Tensor>> encode_clauses(
    const EncoderParams& params, const std::vector<Tensor>& h);

/// g = sigmoid(W_g u_e + b_g); v = g * u_c + (1 - g) * u_e.
std::pair<Tensor, Tensor> gate_fuse(const EncoderParams& params, const Tensor& u_emotion,
                                    const Tensor& u_cause);

/// Two independent 2-class softmax heads.
std::pair<Tensor, Tensor> aux_predict(const EncoderParams& params,
                                      const Tensor& u_emotion, const Tensor& u_cause,
                                      const ForwardContext& ctx);

/// Full encoder pass over a document's clauses (token embeddings per clause).
ClauseStates encode_document(const EncoderParams& params,
                             const std::vector<std::vector<Tensor>>& clause_tokens,
                             const ForwardContext& ctx);

}  // namespace mgsag
