#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mlbinet/param_store.hpp"

namespace mlbinet::ad {

struct AdamConfig {
  double lr = 5e-4;
  double lr_decay = 0.99;  // applied once per epoch via end_epoch()
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double l2 = 2e-5;  // added to the gradient of weight_decay parameters
};

class AdamState {
 public:
  AdamState(const ParamStore& store, AdamConfig cfg);

  // Bias-corrected update from the accumulated grads; grads are zeroed
  // afterwards. Throws NumericError on a non-finite gradient or a
  // parameter without moment buffers.
  void step(ParamStore& store);

  void end_epoch() { lr_ *= cfg_.lr_decay; }

  double lr() const { return lr_; }
  std::uint64_t step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  struct Moments {
    std::vector<double> m, v;
  };

  AdamConfig cfg_;
  double lr_;
  std::uint64_t t_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace mlbinet::ad
