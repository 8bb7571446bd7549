#include "mlbinet/adam.hpp"

#include <cmath>

#include "mlbinet/errors.hpp"

namespace mlbinet::ad {

AdamState::AdamState(const ParamStore& store, AdamConfig cfg) : cfg_(cfg), lr_(cfg.lr) {
  for (const auto& [name, e] : store.entries()) {
    if (!e.trainable) continue;
    Moments mo;
    mo.m.assign(e.value.size(), 0.0);
    mo.v.assign(e.value.size(), 0.0);
    moments_[name] = std::move(mo);
  }
}

void AdamState::step(ParamStore& store) {
  ++t_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (auto& [name, e] : store.entries()) {
    if (!e.trainable) continue;
    auto it = moments_.find(name);
    if (it == moments_.end())
      throw NumericError("adam: no moment buffers for parameter " + name);
    Moments& mo = it->second;
    auto& w = e.value.data();
    auto& g = e.value.grad();
    for (std::size_t i = 0; i < w.size(); ++i) {
      double gi = g[i];
      if (!std::isfinite(gi))
        throw NumericError("adam: non-finite gradient in parameter " + name);
      if (e.weight_decay) gi += cfg_.l2 * w[i];
      mo.m[i] = cfg_.beta1 * mo.m[i] + (1.0 - cfg_.beta1) * gi;
      mo.v[i] = cfg_.beta2 * mo.v[i] + (1.0 - cfg_.beta2) * gi * gi;
      double mhat = mo.m[i] / bc1;
      double vhat = mo.v[i] / bc2;
      w[i] -= lr_ * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
    e.value.zero_grad();
  }
}

}  // namespace mlbinet::ad
