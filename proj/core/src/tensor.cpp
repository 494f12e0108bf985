#include "mgsag/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace mgsag {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                     " vs " + shape_str(b.shape()));
  }
}

}  // namespace

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << " x ";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

double canonical_sum(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc;
}

Tensor Tensor::leaf(std::vector<std::size_t> shape, std::vector<double> values,
                    bool requires_grad) {
  if (shape_product(shape) != values.size()) {
    throw ShapeError("leaf: shape " + shape_str(shape) + " does not match " +
                     std::to_string(values.size()) + " values");
  }
  for (std::size_t d : shape) {
    if (d == 0) throw ShapeError("leaf: zero dimension in " + shape_str(shape));
  }
  auto node = std::make_shared<detail::TensorNode>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::zeros(std::vector<std::size_t> shape, bool requires_grad) {
  std::vector<double> v(shape_product(shape), 0.0);
  return leaf(std::move(shape), std::move(v), requires_grad);
}

Tensor Tensor::full(std::vector<std::size_t> shape, double fill, bool requires_grad) {
  std::vector<double> v(shape_product(shape), fill);
  return leaf(std::move(shape), std::move(v), requires_grad);
}

Tensor Tensor::scalar(double v, bool requires_grad) {
  return leaf({1}, {v}, requires_grad);
}

Tensor Tensor::vector(std::vector<double> values, bool requires_grad) {
  std::size_t n = values.size();
  return leaf({n}, std::move(values), requires_grad);
}

double Tensor::at(std::size_t r, std::size_t c) const {
  if (rank() != 2) throw ShapeError("at(r,c): tensor is not rank-2");
  return node_->values[r * node_->shape[1] + c];
}

std::vector<double>& Tensor::grad() {
  if (!has_grad()) throw NumericError("grad(): gradient not populated");
  return node_->grad;
}

const std::vector<double>& Tensor::grad() const {
  if (!has_grad()) throw NumericError("grad(): gradient not populated");
  return node_->grad;
}

Tensor make_op(const char* op, std::vector<std::size_t> shape,
               std::vector<double> values, std::vector<Tensor> inputs,
               std::function<void(detail::TensorNode&)> backprop) {
  auto node = std::make_shared<detail::TensorNode>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->op = op;
  bool needs = false;
  node->parents.reserve(inputs.size());
  for (const Tensor& t : inputs) {
    needs = needs || t.node()->requires_grad;
    node->parents.push_back(t.node());
  }
  node->requires_grad = needs;
  if (needs) node->backprop = std::move(backprop);
  return Tensor(std::move(node));
}

// ---- elementwise -----------------------------------------------------------

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape("add", a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value(i) + b.value(i);
  return make_op("add", a.shape(), std::move(out), {a, b}, [](detail::TensorNode& n) {
    for (int p = 0; p < 2; ++p) {
      auto& parent = *n.parents[p];
      if (!parent.requires_grad) continue;
      parent.ensure_grad();
      for (std::size_t i = 0; i < n.size(); ++i) parent.grad[i] += n.grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape("sub", a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value(i) - b.value(i);
  return make_op("sub", a.shape(), std::move(out), {a, b}, [](detail::TensorNode& n) {
    if (n.parents[0]->requires_grad) {
      n.parents[0]->ensure_grad();
      for (std::size_t i = 0; i < n.size(); ++i) n.parents[0]->grad[i] += n.grad[i];
    }
    if (n.parents[1]->requires_grad) {
      n.parents[1]->ensure_grad();
      for (std::size_t i = 0; i < n.size(); ++i) n.parents[1]->grad[i] -= n.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape("mul", a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value(i) * b.value(i);
  return make_op("mul", a.shape(), std::move(out), {a, b}, [](detail::TensorNode& n) {
    auto& pa = *n.parents[0];
    auto& pb = *n.parents[1];
    if (pa.requires_grad) {
      pa.ensure_grad();
      for (std::size_t i = 0; i < n.size(); ++i) pa.grad[i] += n.grad[i] * pb.values[i];
    }
    if (pb.requires_grad) {
      pb.ensure_grad();
      for (std::size_t i = 0; i < n.size(); ++i) pb.grad[i] += n.grad[i] * pa.values[i];
    }
  });
}

Tensor scale(const Tensor& a, double c) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value(i) * c;
  return make_op("scale", a.shape(), std::move(out), {a}, [c](detail::TensorNode& n) {
    auto& pa = *n.parents[0];
    pa.ensure_grad();
    for (std::size_t i = 0; i < n.size(); ++i) pa.grad[i] += n.grad[i] * c;
  });
}

Tensor smul(const Tensor& s, const Tensor& a) {
  if (s.size() != 1) {
    throw ShapeError("smul: first operand must be scalar, got " + shape_str(s.shape()));
  }
  const double sv = s.value(0);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sv * a.value(i);
  return make_op("smul", a.shape(), std::move(out), {s, a}, [](detail::TensorNode& n) {
    auto& ps = *n.parents[0];
    auto& pa = *n.parents[1];
    if (ps.requires_grad) {
      ps.ensure_grad();
      double acc = 0.0;
      for (std::size_t i = 0; i < n.size(); ++i) acc += n.grad[i] * pa.values[i];
      ps.grad[0] += acc;
    }
    if (pa.requires_grad) {
      pa.ensure_grad();
      const double sv = ps.values[0];
      for (std::size_t i = 0; i < n.size(); ++i) pa.grad[i] += n.grad[i] * sv;
    }
  });
}

// ---- linear algebra ---------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
  // Resolve the three supported rank combinations to an m x k x n product.
  std::size_t m, k, n;
  bool a_vec = a.rank() == 1, b_vec = b.rank() == 1;
  if (a.rank() == 2 && b.rank() == 2) {
    m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
    if (b.shape()[0] != k)
      throw ShapeError("matmul: shape mismatch " + shape_str(a.shape()) + " vs " +
                       shape_str(b.shape()));
  } else if (a.rank() == 2 && b_vec) {
    m = a.shape()[0], k = a.shape()[1], n = 1;
    if (b.shape()[0] != k)
      throw ShapeError("matmul: shape mismatch " + shape_str(a.shape()) + " vs " +
                       shape_str(b.shape()));
  } else if (a_vec && b.rank() == 2) {
    m = 1, k = a.shape()[0], n = b.shape()[1];
    if (b.shape()[0] != k)
      throw ShapeError("matmul: shape mismatch " + shape_str(a.shape()) + " vs " +
                       shape_str(b.shape()));
  } else {
    throw ShapeError("matmul: unsupported ranks " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  }

  std::vector<double> out(m * n, 0.0);
  const auto& av = a.values();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) acc += av[i * k + t] * bv[t * n + j];
      out[i * n + j] = acc;
    }

  std::vector<std::size_t> out_shape;
  if (a_vec)
    out_shape = {n};
  else if (b_vec)
    out_shape = {m};
  else
    out_shape = {m, n};

  return make_op("matmul", std::move(out_shape), std::move(out), {a, b},
                 [m, k, n](detail::TensorNode& node) {
                   auto& pa = *node.parents[0];
                   auto& pb = *node.parents[1];
                   const auto& g = node.grad;
                   if (pa.requires_grad) {
                     pa.ensure_grad();  // dA = G * B^T
                     for (std::size_t i = 0; i < m; ++i)
                       for (std::size_t t = 0; t < k; ++t) {
                         double acc = 0.0;
                         for (std::size_t j = 0; j < n; ++j)
                           acc += g[i * n + j] * pb.values[t * n + j];
                         pa.grad[i * k + t] += acc;
                       }
                   }
                   if (pb.requires_grad) {
                     pb.ensure_grad();  // dB = A^T * G
                     for (std::size_t t = 0; t < k; ++t)
                       for (std::size_t j = 0; j < n; ++j) {
                         double acc = 0.0;
                         for (std::size_t i = 0; i < m; ++i)
                           acc += pa.values[i * k + t] * g[i * n + j];
                         pb.grad[t * n + j] += acc;
                       }
                   }
                 });
}

Tensor dot(const Tensor& a, const Tensor& b) {
  if (a.rank() != 1 || b.rank() != 1 || a.size() != b.size()) {
    throw ShapeError("dot: shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.value(i) * b.value(i);
  return make_op("dot", {1}, {acc}, {a, b}, [](detail::TensorNode& n) {
    auto& pa = *n.parents[0];
    auto& pb = *n.parents[1];
    const double g = n.grad[0];
    if (pa.requires_grad) {
      pa.ensure_grad();
      for (std::size_t i = 0; i < pa.size(); ++i) pa.grad[i] += g * pb.values[i];
    }
    if (pb.requires_grad) {
      pb.ensure_grad();
      for (std::size_t i = 0; i < pb.size(); ++i) pb.grad[i] += g * pa.values[i];
    }
  });
}

// ---- shape plumbing ----------------------------------------------------------

Tensor concat(const Tensor& a, const Tensor& b) {
  if (a.rank() != 1 || b.rank() != 1) {
    throw ShapeError("concat: expects rank-1 operands, got " + shape_str(a.shape()) +
                     " and " + shape_str(b.shape()));
  }
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.values().begin(), a.values().end());
  out.insert(out.end(), b.values().begin(), b.values().end());
  const std::size_t na = a.size();
  return make_op("concat", {a.size() + b.size()}, std::move(out), {a, b},
                 [na](detail::TensorNode& n) {
                   auto& pa = *n.parents[0];
                   auto& pb = *n.parents[1];
                   if (pa.requires_grad) {
                     pa.ensure_grad();
                     for (std::size_t i = 0; i < na; ++i) pa.grad[i] += n.grad[i];
                   }
                   if (pb.requires_grad) {
                     pb.ensure_grad();
                     for (std::size_t i = 0; i < pb.size(); ++i)
                       pb.grad[i] += n.grad[na + i];
                   }
                 });
}

Tensor stack_rows(const std::vector<Tensor>& rows) {
  if (rows.empty()) throw ShapeError("stack_rows: no rows given");
  const std::size_t n = rows[0].size();
  std::vector<double> out;
  out.reserve(rows.size() * n);
  std::vector<Tensor> inputs;
  inputs.reserve(rows.size());
  for (const Tensor& r : rows) {
    if (r.rank() != 1 || r.size() != n) {
      throw ShapeError("stack_rows: row shape " + shape_str(r.shape()) +
                       " does not match " + shape_str(rows[0].shape()));
    }
    out.insert(out.end(), r.values().begin(), r.values().end());
    inputs.push_back(r);
  }
  return make_op("stack_rows", {rows.size(), n}, std::move(out), std::move(inputs),
                 [n](detail::TensorNode& node) {
                   for (std::size_t r = 0; r < node.parents.size(); ++r) {
                     auto& p = *node.parents[r];
                     if (!p.requires_grad) continue;
                     p.ensure_grad();
                     for (std::size_t i = 0; i < n; ++i)
                       p.grad[i] += node.grad[r * n + i];
                   }
                 });
}

Tensor stack_scalars(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw ShapeError("stack_scalars: no inputs given");
  std::vector<double> out;
  out.reserve(xs.size());
  std::vector<Tensor> inputs;
  inputs.reserve(xs.size());
  for (const Tensor& x : xs) {
    if (x.size() != 1) {
      throw ShapeError("stack_scalars: operand shape " + shape_str(x.shape()) +
                       " is not scalar");
    }
    out.push_back(x.value(0));
    inputs.push_back(x);
  }
  return make_op("stack_scalars", {xs.size()}, std::move(out), std::move(inputs),
                 [](detail::TensorNode& node) {
                   for (std::size_t i = 0; i < node.parents.size(); ++i) {
                     auto& p = *node.parents[i];
                     if (!p.requires_grad) continue;
                     p.ensure_grad();
                     p.grad[0] += node.grad[i];
                   }
                 });
}

Tensor pick(const Tensor& v, std::size_t index) {
  if (v.rank() != 1) throw ShapeError("pick: expects rank-1, got " + shape_str(v.shape()));
  if (index >= v.size()) {
    throw ShapeError("pick: index " + std::to_string(index) + " out of range for " +
                     shape_str(v.shape()));
  }
  return make_op("pick", {1}, {v.value(index)}, {v}, [index](detail::TensorNode& n) {
    auto& p = *n.parents[0];
    p.ensure_grad();
    p.grad[index] += n.grad[0];
  });
}

// ---- nonlinearities ----------------------------------------------------------

Tensor tanh(const Tensor& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(a.value(i));
  return make_op("tanh", a.shape(), std::move(out), {a}, [](detail::TensorNode& n) {
    auto& p = *n.parents[0];
    p.ensure_grad();
    for (std::size_t i = 0; i < n.size(); ++i) {
      const double y = n.values[i];
      p.grad[i] += n.grad[i] * (1.0 - y * y);
    }
  });
}

Tensor sigmoid(const Tensor& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-a.value(i)));
  return make_op("sigmoid", a.shape(), std::move(out), {a}, [](detail::TensorNode& n) {
    auto& p = *n.parents[0];
    p.ensure_grad();
    for (std::size_t i = 0; i < n.size(); ++i) {
      const double y = n.values[i];
      p.grad[i] += n.grad[i] * y * (1.0 - y);
    }
  });
}

Tensor relu(const Tensor& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value(i) > 0.0 ? a.value(i) : 0.0;
  return make_op("relu", a.shape(), std::move(out), {a}, [](detail::TensorNode& n) {
    auto& p = *n.parents[0];
    p.ensure_grad();
    for (std::size_t i = 0; i < n.size(); ++i)
      if (p.values[i] > 0.0) p.grad[i] += n.grad[i];
  });
}

Tensor leaky_relu(const Tensor& a, double negative_slope) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = a.value(i);
    out[i] = x > 0.0 ? x : negative_slope * x;
  }
  return make_op("leaky_relu", a.shape(), std::move(out), {a},
                 [negative_slope](detail::TensorNode& n) {
                   auto& p = *n.parents[0];
                   p.ensure_grad();
                   for (std::size_t i = 0; i < n.size(); ++i)
                     p.grad[i] += n.grad[i] * (p.values[i] > 0.0 ? 1.0 : negative_slope);
                 });
}

namespace {

// Softmax of one lane; writes into out at the given stride. The normalizer is
// a canonical (value-sorted) sum so lane order never changes the result bits.
void softmax_lane(const std::vector<double>& in, std::vector<double>& out,
                  std::size_t begin, std::size_t stride, std::size_t count) {
  double mx = in[begin];
  for (std::size_t i = 1; i < count; ++i) mx = std::max(mx, in[begin + i * stride]);
  std::vector<double> e(count);
  for (std::size_t i = 0; i < count; ++i) e[i] = std::exp(in[begin + i * stride] - mx);
  const double denom = canonical_sum(e);
  for (std::size_t i = 0; i < count; ++i) out[begin + i * stride] = e[i] / denom;
}

}  // namespace

Tensor softmax(const Tensor& a, std::size_t axis) {
  if (axis >= a.rank()) {
    throw ShapeError("softmax: axis " + std::to_string(axis) + " out of range for " +
                     shape_str(a.shape()));
  }
  std::vector<double> out(a.size());
  const auto& in = a.values();
  std::size_t lanes, count, lane_stride, elem_stride;
  if (a.rank() == 1) {
    lanes = 1, count = a.size(), lane_stride = 0, elem_stride = 1;
  } else if (a.rank() == 2) {
    const std::size_t r = a.shape()[0], c = a.shape()[1];
    if (axis == 1) {
      lanes = r, count = c, lane_stride = c, elem_stride = 1;
    } else {
      lanes = c, count = r, lane_stride = 1, elem_stride = c;
    }
  } else {
    throw ShapeError("softmax: rank > 2 unsupported, got " + shape_str(a.shape()));
  }
  for (std::size_t l = 0; l < lanes; ++l)
    softmax_lane(in, out, l * lane_stride, elem_stride, count);

  return make_op("softmax", a.shape(), std::move(out), {a},
                 [lanes, count, lane_stride, elem_stride](detail::TensorNode& n) {
                   auto& p = *n.parents[0];
                   p.ensure_grad();
                   for (std::size_t l = 0; l < lanes; ++l) {
                     const std::size_t base = l * lane_stride;
                     double gy = 0.0;
                     for (std::size_t i = 0; i < count; ++i) {
                       const std::size_t idx = base + i * elem_stride;
                       gy += n.grad[idx] * n.values[idx];
                     }
                     for (std::size_t i = 0; i < count; ++i) {
                       const std::size_t idx = base + i * elem_stride;
                       p.grad[idx] += n.values[idx] * (n.grad[idx] - gy);
                     }
                   }
                 });
}

Tensor dropout(const Tensor& a, double rate, bool training, std::mt19937_64& rng) {
  if (rate < 0.0 || rate >= 1.0) {
    throw NumericError("dropout: rate must be in [0,1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) return a;
  std::bernoulli_distribution keep(1.0 - rate);
  const double inv_keep = 1.0 / (1.0 - rate);
  std::vector<double> mask(a.size());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    mask[i] = keep(rng) ? inv_keep : 0.0;
    out[i] = a.value(i) * mask[i];
  }
  return make_op("dropout", a.shape(), std::move(out), {a},
                 [mask = std::move(mask)](detail::TensorNode& n) {
                   auto& p = *n.parents[0];
                   p.ensure_grad();
                   for (std::size_t i = 0; i < n.size(); ++i)
                     p.grad[i] += n.grad[i] * mask[i];
                 });
}

Tensor sum(const Tensor& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.value(i);
  return make_op("sum", {1}, {acc}, {a}, [](detail::TensorNode& n) {
    auto& p = *n.parents[0];
    p.ensure_grad();
    for (std::size_t i = 0; i < p.size(); ++i) p.grad[i] += n.grad[0];
  });
}

Tensor mean(const Tensor& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.value(i);
  const double inv = 1.0 / static_cast<double>(a.size());
  return make_op("mean", {1}, {acc * inv}, {a}, [inv](detail::TensorNode& n) {
    auto& p = *n.parents[0];
    p.ensure_grad();
    for (std::size_t i = 0; i < p.size(); ++i) p.grad[i] += n.grad[0] * inv;
  });
}

Tensor attend_sum(const Tensor& weights, const std::vector<Tensor>& rows) {
  if (weights.rank() != 1 || weights.size() != rows.size()) {
    throw ShapeError("attend_sum: " + std::to_string(rows.size()) +
                     " rows vs weights " + shape_str(weights.shape()));
  }
  if (rows.empty()) throw ShapeError("attend_sum: no rows given");
  const std::size_t n = rows[0].size();
  for (const Tensor& r : rows) {
    if (r.rank() != 1 || r.size() != n) {
      throw ShapeError("attend_sum: row shape " + shape_str(r.shape()) +
                       " does not match " + shape_str(rows[0].shape()));
    }
  }
  const std::size_t k = rows.size();
  std::vector<double> out(n);
  std::vector<double> terms(k);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t j = 0; j < k; ++j) terms[j] = weights.value(j) * rows[j].value(c);
    out[c] = canonical_sum(terms);
  }
  std::vector<Tensor> inputs;
  inputs.reserve(k + 1);
  inputs.push_back(weights);
  for (const Tensor& r : rows) inputs.push_back(r);
  return make_op("attend_sum", {n}, std::move(out), std::move(inputs),
                 [n, k](detail::TensorNode& node) {
                   auto& w = *node.parents[0];
                   if (w.requires_grad) {
                     w.ensure_grad();
                     for (std::size_t j = 0; j < k; ++j) {
                       auto& row = *node.parents[1 + j];
                       double acc = 0.0;
                       for (std::size_t c = 0; c < n; ++c)
                         acc += node.grad[c] * row.values[c];
                       w.grad[j] += acc;
                     }
                   }
                   for (std::size_t j = 0; j < k; ++j) {
                     auto& row = *node.parents[1 + j];
                     if (!row.requires_grad) continue;
                     row.ensure_grad();
                     const double wj = w.values[j];
                     for (std::size_t c = 0; c < n; ++c)
                       row.grad[c] += node.grad[c] * wj;
                   }
                 });
}

Tensor cross_entropy(const Tensor& probs, std::size_t gold_label) {
  if (probs.rank() != 1) {
    throw ShapeError("cross_entropy: expects rank-1 probs, got " +
                     shape_str(probs.shape()));
  }
  if (gold_label >= probs.size()) {
    throw NumericError("cross_entropy: label " + std::to_string(gold_label) +
                       " out of range for " + std::to_string(probs.size()) + " classes");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) total += probs.value(i);
  if (std::abs(total - 1.0) > 1e-6) {
    throw NumericError("cross_entropy: probs sum to " + std::to_string(total) +
                       ", not a simplex");
  }
  constexpr double kFloor = 1e-12;
  const double p = probs.value(gold_label);
  const double loss = -std::log(std::max(p, kFloor));
  return make_op("cross_entropy", {1}, {loss}, {probs},
                 [gold_label](detail::TensorNode& n) {
                   auto& parent = *n.parents[0];
                   parent.ensure_grad();
                   const double p = parent.values[gold_label];
                   if (p >= kFloor) parent.grad[gold_label] += n.grad[0] * (-1.0 / p);
                 });
}

// ---- backward ----------------------------------------------------------------

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw NumericError("backward: loss must be a defined scalar tensor" +
                       (loss.defined() ? ", got shape " + shape_str(loss.shape()) : std::string()));
  }
  auto root = loss.node();
  if (root->backward_done) {
    throw NumericError("backward: called twice on the same loss without rebuilding the graph");
  }
  root->backward_done = true;
  if (!root->requires_grad) return;  // constant loss: nothing reachable

  // Iterative post-order DFS; graphs can be deep through recurrent chains.
  std::vector<detail::TensorNode*> order;
  std::unordered_set<detail::TensorNode*> visited;
  std::vector<std::pair<detail::TensorNode*, std::size_t>> stack;
  stack.emplace_back(root.get(), 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      detail::TensorNode* p = node->parents[next++].get();
      if (p->requires_grad && !visited.count(p)) {
        visited.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root->ensure_grad();
  root->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::TensorNode* node = *it;
    if (node->backprop) {
      node->ensure_grad();
      node->backprop(*node);
    }
  }
}

}  // namespace mgsag
