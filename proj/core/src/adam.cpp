#include "mgsag/adam.hpp"

#include <cmath>

namespace mgsag {

void AdamState::step(ParamStore& store) {
  for (auto& [name, param] : store) {
    if (!param.has_grad())
      throw NumericError("adam_step: parameter '" + name + "' has no gradient");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (auto& [name, param] : store) {
    auto& m = m_[name];
    auto& v = v_[name];
    if (m.size() != param.size()) m.assign(param.size(), 0.0);
    if (v.size() != param.size()) v.assign(param.size(), 0.0);
    auto& values = param.values();
    auto& grad = param.grad();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double g = grad[i];
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      values[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
      grad[i] = 0.0;
    }
  }
}

}  // namespace mgsag
