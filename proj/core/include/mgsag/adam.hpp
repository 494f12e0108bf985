// Adam with bias correction over a ParamStore.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mgsag/param_store.hpp"

namespace mgsag {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  explicit AdamState(AdamConfig config = {}) : config_(config) {}

  /// One update over every parameter; requires populated grads (zero counts,
  /// absent does not). Grads are zeroed afterwards.
  void step(ParamStore& store);

  long step_count() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  long t_ = 0;
  std::map<std::string, std::vector<double>> m_;
  std::map<std::string, std::vector<double>> v_;
};

}  // namespace mgsag
