#include "mlbinet/lstm.hpp"

namespace mlbinet::nn {

namespace ops = mlbinet::ad;

LstmParams make_lstm(ParamStore& store, const std::string& prefix, std::size_t input,
                     std::size_t hidden, Rng& rng) {
  LstmParams p;
  p.hidden = hidden;
  p.w_in = store.create_uniform(prefix + ".w_in", input, 4 * hidden, rng, -0.08, 0.08);
  p.w_rec = store.create_uniform(prefix + ".w_rec", hidden, 4 * hidden, rng, -0.08, 0.08);
  p.b = store.create(prefix + ".b", 1, 4 * hidden, true, false);
  for (std::size_t j = hidden; j < 2 * hidden; ++j) p.b.data()[j] = 1.0;
  return p;
}

std::pair<Value, Value> lstm_step_pre(const LstmParams& p, const Value& x_proj, const Value& h,
                                      const Value& c) {
  std::size_t hd = p.hidden;
  Value gates = ops::add(ops::add(x_proj, ops::matmul(h, p.w_rec)), p.b);
  Value i = ops::sigmoid(ops::slice_cols(gates, 0, hd));
  Value f = ops::sigmoid(ops::slice_cols(gates, hd, 2 * hd));
  Value g = ops::tanh(ops::slice_cols(gates, 2 * hd, 3 * hd));
  Value o = ops::sigmoid(ops::slice_cols(gates, 3 * hd, 4 * hd));
  Value c_next = ops::add(ops::mul(f, c), ops::mul(i, g));
  Value h_next = ops::mul(o, ops::tanh(c_next));
  return {h_next, c_next};
}

std::pair<Value, Value> lstm_step(const LstmParams& p, const Value& x, const Value& h,
                                  const Value& c) {
  return lstm_step_pre(p, ops::matmul(x, p.w_in), h, c);
}

Value lstm_run(const LstmParams& p, const Value& x_seq) {
  std::size_t n = x_seq.rows();
  Value proj = ops::matmul(x_seq, p.w_in);
  Value h = Value::zeros(1, p.hidden);
  Value c = Value::zeros(1, p.hidden);
  std::vector<Value> states;
  states.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    auto [h_next, c_next] = lstm_step_pre(p, ops::slice_rows(proj, t, t + 1), h, c);
    h = h_next;
    c = c_next;
    states.push_back(h);
  }
  return n == 1 ? states[0] : ops::concat_rows(states);
}

}  // namespace mlbinet::nn
