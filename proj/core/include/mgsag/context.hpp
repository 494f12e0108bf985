// Shared forward-pass context: training mode, the dropout stream, and an
// optional probe that collects every attention / softmax distribution
// produced during the pass (used by simplex-invariant checks).

#pragma once

#include <random>
#include <vector>

namespace mgsag {

struct ForwardContext {
  bool training = false;
  std::mt19937_64* rng = nullptr;  // required when training with dropout > 0
  std::vector<std::vector<double>>* simplex_probe = nullptr;

  void probe(const std::vector<double>& distribution) const {
    if (simplex_probe) simplex_probe->push_back(distribution);
  }
};

}  // namespace mgsag
