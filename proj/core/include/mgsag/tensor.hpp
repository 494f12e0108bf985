// Dense double-precision tensors with reverse-mode automatic differentiation.
//
// A Tensor is a cheap handle onto a shared graph node. Operations record
// their inputs and a backward closure; backward(loss) walks the graph in
// reverse topological order and accumulates partial derivatives into every
// reachable leaf that requires gradients.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgsag {

/// Thrown when operand shapes do not conform to an op's rule.
class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on numeric misuse: non-scalar loss, double backward, divergence.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

struct TensorNode {
  std::vector<std::size_t> shape;
  std::vector<double> values;
  bool requires_grad = false;
  std::vector<double> grad;  // empty until first touched
  std::vector<std::shared_ptr<TensorNode>> parents;
  std::function<void(TensorNode&)> backprop;  // adds into parents' grads
  const char* op = "leaf";
  bool backward_done = false;  // set on a node used as a backward root

  std::size_t size() const { return values.size(); }
  void ensure_grad() {
    if (grad.size() != values.size()) grad.assign(values.size(), 0.0);
  }
};

}  // namespace detail

class Tensor {
 public:
  Tensor() = default;

  /// Leaf node holding explicit values; the graph root for parameters and
  /// constants alike.
  static Tensor leaf(std::vector<std::size_t> shape, std::vector<double> values,
                     bool requires_grad = false);
  static Tensor zeros(std::vector<std::size_t> shape, bool requires_grad = false);
  static Tensor full(std::vector<std::size_t> shape, double fill,
                     bool requires_grad = false);
  static Tensor scalar(double v, bool requires_grad = false);
  /// Rank-1 convenience leaf.
  static Tensor vector(std::vector<double> values, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const std::vector<std::size_t>& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t size() const { return node_->values.size(); }

  double value(std::size_t i = 0) const { return node_->values[i]; }
  double at(std::size_t r, std::size_t c) const;
  std::vector<double>& values() { return node_->values; }
  const std::vector<double>& values() const { return node_->values; }

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return node_->grad.size() == node_->values.size(); }
  std::vector<double>& grad();
  const std::vector<double>& grad() const;
  void ensure_zero_grad() { node_->ensure_grad(); }
  void clear_grad() { node_->grad.clear(); }

  const char* op_name() const { return node_->op; }
  std::shared_ptr<detail::TensorNode> node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::TensorNode> n) : node_(std::move(n)) {}
  std::shared_ptr<detail::TensorNode> node_;

  friend Tensor make_op(const char* op, std::vector<std::size_t> shape,
                        std::vector<double> values, std::vector<Tensor> inputs,
                        std::function<void(detail::TensorNode&)> backprop);
};

/// Internal factory used by every op; exposed so tests can build custom ops.
Tensor make_op(const char* op, std::vector<std::size_t> shape,
               std::vector<double> values, std::vector<Tensor> inputs,
               std::function<void(detail::TensorNode&)> backprop);

// ---- op catalog ------------------------------------------------------------

Tensor add(const Tensor& a, const Tensor& b);   // elementwise, same shape
Tensor sub(const Tensor& a, const Tensor& b);   // elementwise, same shape
Tensor mul(const Tensor& a, const Tensor& b);   // Hadamard, same shape
Tensor scale(const Tensor& a, double c);        // constant multiply
Tensor smul(const Tensor& s, const Tensor& a);  // scalar tensor [1] times a

/// matmul supports [m x k]*[k x n], [m x k]*[k], and [k]*[k x n].
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor dot(const Tensor& a, const Tensor& b);  // rank-1 x rank-1 -> [1]

Tensor concat(const Tensor& a, const Tensor& b);        // rank-1 ++ rank-1
Tensor stack_rows(const std::vector<Tensor>& rows);     // k x [n] -> [k x n]
Tensor stack_scalars(const std::vector<Tensor>& xs);    // k x [1] -> [k]
Tensor pick(const Tensor& v, std::size_t index);        // rank-1 -> [1]

Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double negative_slope = 0.2);

/// Softmax along `axis`. Rank-1 tensors use axis 0; rank-2 tensors accept
/// axis 0 (down columns) or 1 (across rows). The normalizer is accumulated
/// in value-sorted order so the result is bitwise invariant under input
/// permutation.
Tensor softmax(const Tensor& a, std::size_t axis = 0);

/// Inverted dropout: zeroes entries with probability `rate` and rescales
/// survivors by 1/(1-rate). When `training` is false this is the identity.
Tensor dropout(const Tensor& a, double rate, bool training, std::mt19937_64& rng);

Tensor sum(const Tensor& a);   // -> [1]
Tensor mean(const Tensor& a);  // -> [1]

/// Weighted sum of rows: out = sum_j weights[j] * rows[j]. Per-coordinate
/// terms are accumulated in value-sorted order, making the output bitwise
/// invariant under a joint permutation of (weights, rows).
Tensor attend_sum(const Tensor& weights, const std::vector<Tensor>& rows);

/// -log(probs[gold_label]) with the log argument floored at 1e-12.
/// `probs` must be a rank-1 simplex (sum within 1e-6 of 1).
Tensor cross_entropy(const Tensor& probs, std::size_t gold_label);

// ---- backward --------------------------------------------------------------

/// Reverse-mode sweep from a scalar loss. Accumulates into the grad of every
/// reachable requires_grad node. Calling twice on the same loss node without
/// rebuilding the graph is an error.
void backward(const Tensor& loss);

/// Sum accumulated in ascending value order; bitwise permutation-invariant.
double canonical_sum(std::vector<double> xs);

std::string shape_str(const std::vector<std::size_t>& shape);

}  // namespace mgsag
