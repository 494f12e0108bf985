// Named trainable parameters. Iteration follows lexicographic name order so
// every pass over the store (init, Adam, gradient checking, serialization)
// is deterministic.

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mgsag/tensor.hpp"

namespace mgsag {

class ParamStore {
 public:
  explicit ParamStore(std::uint64_t rng_seed = 0);

  // Tensors are shared handles; copying a store would alias its parameters.
  ParamStore(const ParamStore&) = delete;
  ParamStore& operator=(const ParamStore&) = delete;
  ParamStore(ParamStore&&) = default;
  ParamStore& operator=(ParamStore&&) = default;

  /// Matrix parameter initialized uniform in +-sqrt(6/(fan_in+fan_out)).
  Tensor& add_matrix(const std::string& name, std::size_t rows, std::size_t cols);
  /// Vector parameter, constant-filled (zeros unless stated otherwise).
  Tensor& add_vector(const std::string& name, std::size_t n, double fill = 0.0);
  /// Scalar parameter.
  Tensor& add_scalar(const std::string& name, double v = 0.0);

  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;
  bool contains(const std::string& name) const { return entries_.count(name) > 0; }

  std::size_t size() const { return entries_.size(); }
  /// Total number of scalar coordinates across all parameters.
  std::size_t coordinate_count() const;

  void zero_grad();

  std::uint64_t rng_seed() const { return seed_; }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Flat named-array dump, and its inverse. JSON: {"name": {"shape": [...],
  /// "values": [...]}, ...}.
  std::string to_json() const;
  static ParamStore from_json(const std::string& text);

 private:
  Tensor& insert(const std::string& name, Tensor t);

  std::map<std::string, Tensor> entries_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

}  // namespace mgsag
