// Central finite-difference gradient oracle over an entire ParamStore.

#pragma once

#include <functional>
#include <string>

#include "mgsag/param_store.hpp"
#include "mgsag/tensor.hpp"

namespace mgsag {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates = 0;
};

/// Compares the analytic gradient of model_fn(store) against central
/// differences (f(p+eps) - f(p-eps)) / (2 eps) for every parameter
/// coordinate. Relative error is |a-n| / max(|a|, |n|, 1e-5); the floor
/// absorbs central-difference rounding noise on zero- and tiny-gradient
/// coordinates.
///
/// model_fn must be deterministic (dropout disabled); two baseline
/// evaluations are compared and a mismatch raises NumericError.
GradCheckReport finite_difference_check(
    const std::function<Tensor(ParamStore&)>& model_fn, ParamStore& store,
    double eps = 1e-5);

}  // namespace mgsag
