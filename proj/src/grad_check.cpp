#include "mlbinet/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlbinet/errors.hpp"

namespace mlbinet::ad {

namespace {

double eval_scalar(const std::function<Value()>& fn) {
  Value v = fn();
  double x = v.item();
  release_graph(v);
  if (!std::isfinite(x)) throw NumericError("grad_check: non-finite function value at probe");
  return x;
}

}  // namespace

GradCheckResult grad_check(const std::function<Value()>& loss_fn, ParamStore& params,
                           double step, std::size_t max_coords_per_param, Rng* rng) {
  params.zero_grads();
  Value loss = loss_fn();
  double base = loss.item();
  if (!std::isfinite(base)) throw NumericError("grad_check: non-finite loss");
  loss.backward();
  release_graph(loss);

  std::map<std::string, std::vector<double>> analytic;
  for (const auto& [name, e] : params.entries())
    if (e.trainable) analytic[name] = e.value.grad();

  GradCheckResult result;
  for (auto& [name, e] : params.entries()) {
    if (!e.trainable) continue;
    auto& w = e.value.data();
    std::vector<std::size_t> coords(w.size());
    std::iota(coords.begin(), coords.end(), 0);
    if (max_coords_per_param > 0 && coords.size() > max_coords_per_param) {
      if (!rng) throw Error("grad_check: sampling requested without an rng");
      rng->shuffle(coords);
      coords.resize(max_coords_per_param);
    }
    const auto& grad = analytic[name];
    for (std::size_t i : coords) {
      double saved = w[i];
      w[i] = saved + step;
      double plus = eval_scalar(loss_fn);
      w[i] = saved - step;
      double minus = eval_scalar(loss_fn);
      w[i] = saved;
      double numeric = (plus - minus) / (2.0 * step);
      double denom = std::max({std::fabs(grad[i]), std::fabs(numeric), 1e-8});
      result.max_rel_err = std::max(result.max_rel_err, std::fabs(grad[i] - numeric) / denom);
      ++result.coords_checked;
    }
  }
  params.zero_grads();
  return result;
}

}  // namespace mlbinet::ad
