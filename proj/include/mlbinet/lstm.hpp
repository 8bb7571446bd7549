#pragma once

#include <string>
#include <utility>

#include "mlbinet/ops.hpp"
#include "mlbinet/param_store.hpp"

namespace mlbinet::nn {

using ad::ParamStore;
using ad::Value;

// Standard non-peephole LSTM. Gate blocks are packed [input, forget, cell,
// output] along the 4h axis; the forget-gate bias starts at 1, everything
// else uniform(-0.08, 0.08) for weights and 0 for biases.
struct LstmParams {
  Value w_in;   // in x 4h
  Value w_rec;  // h x 4h
  Value b;      // 1 x 4h
  std::size_t hidden = 0;
};

LstmParams make_lstm(ParamStore& store, const std::string& prefix, std::size_t input,
                     std::size_t hidden, Rng& rng);

// One step; x is 1 x in, h/c are 1 x h. Gradients flow to x, both states
// and all gate weights.
std::pair<Value, Value> lstm_step(const LstmParams& p, const Value& x, const Value& h,
                                  const Value& c);

// As lstm_step but from a precomputed input projection row (1 x 4h), so a
// whole sequence can share one input matmul.
std::pair<Value, Value> lstm_step_pre(const LstmParams& p, const Value& x_proj, const Value& h,
                                      const Value& c);

// Runs the cell left to right over the rows of X (n x in) from zero states
// and stacks the hidden states into an n x h matrix.
Value lstm_run(const LstmParams& p, const Value& x_seq);

}  // namespace mlbinet::nn
