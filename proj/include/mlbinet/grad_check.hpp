#pragma once

#include <functional>

#include "mlbinet/param_store.hpp"
#include "mlbinet/rng.hpp"

namespace mlbinet::ad {

// Central finite differences against the reverse-mode gradients. The loss
// function must rebuild its graph from the current parameter values on
// every call and must be deterministic (run the model in inference mode).
struct GradCheckResult {
  double max_rel_err = 0.0;
  std::size_t coords_checked = 0;
};

// Relative error is |analytic - numeric| / max(|analytic|, |numeric|, 1e-8),
// maximized over the probed coordinates. `max_coords_per_param` = 0 probes
// every coordinate; otherwise that many are sampled per parameter with
// `rng` (required in that case). Throws NumericError if the function value
// is non-finite at any probe point.
GradCheckResult grad_check(const std::function<Value()>& loss_fn, ParamStore& params,
                           double step = 1e-5, std::size_t max_coords_per_param = 0,
                           Rng* rng = nullptr);

}  // namespace mlbinet::ad
