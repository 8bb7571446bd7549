#include "mlbinet/decoder.hpp"

#include "mlbinet/errors.hpp"

namespace mlbinet::nn {

namespace ops = mlbinet::ad;

Direction parse_direction(const std::string& s) {
  if (s == "forward") return Direction::forward;
  if (s == "backward") return Direction::backward;
  if (s == "bidirectional") return Direction::bidirectional;
  throw ConfigError("unknown decoder direction: " + s);
}

TagTransform parse_tag_transform(const std::string& s) {
  if (s == "identity") return TagTransform::identity;
  if (s == "tanh") return TagTransform::tanh;
  if (s == "sigmoid") return TagTransform::sigmoid;
  throw ConfigError("unknown tag transform: " + s);
}

CellKind parse_cell_kind(const std::string& s) {
  if (s == "lstm") return CellKind::lstm;
  if (s == "rnn") return CellKind::rnn;
  throw ConfigError("unknown decoder cell: " + s);
}

const char* to_string(Direction d) {
  switch (d) {
    case Direction::forward: return "forward";
    case Direction::backward: return "backward";
    default: return "bidirectional";
  }
}

const char* to_string(TagTransform f) {
  switch (f) {
    case TagTransform::identity: return "identity";
    case TagTransform::tanh: return "tanh";
    default: return "sigmoid";
  }
}

const char* to_string(CellKind c) { return c == CellKind::lstm ? "lstm" : "rnn"; }

std::size_t BiDecoder::gate_width() const {
  return dims_.cell == CellKind::lstm ? 4 * dims_.hidden : dims_.hidden;
}

BiDecoder::Cell BiDecoder::make_cell(ParamStore& store, const std::string& prefix,
                                     Rng& rng) const {
  Cell c;
  std::size_t g = gate_width();
  std::size_t ctx = dims_.input_width + 2 * dims_.summary_width;
  c.w_tag = store.create_uniform(prefix + ".w_tag", dims_.tag_dim, g, rng, -0.08, 0.08);
  c.w_ctx = store.create_uniform(prefix + ".w_ctx", ctx, g, rng, -0.08, 0.08);
  c.w_rec = store.create_uniform(prefix + ".w_rec", dims_.hidden, g, rng, -0.08, 0.08);
  c.b = store.create(prefix + ".b", 1, g, true, false);
  if (dims_.cell == CellKind::lstm)
    for (std::size_t j = dims_.hidden; j < 2 * dims_.hidden; ++j) c.b.data()[j] = 1.0;
  return c;
}

BiDecoder::BiDecoder(ParamStore& store, const DecoderDims& dims, Rng& rng) : dims_(dims) {
  fw_ = make_cell(store, "decoder.fw", rng);
  bw_ = make_cell(store, "decoder.bw", rng);
  w_proj_ = store.create_uniform("decoder.tag_proj.w", dims_.hidden, dims_.tag_dim, rng,
                                 -0.08, 0.08);
  b_proj_ = store.create("decoder.tag_proj.b", 1, dims_.tag_dim, true, false);
}

Value BiDecoder::decode_direction(bool forward_dir, const Value& x, const Value& i_prev,
                                  const Value& i_next) const {
  std::size_t n = x.rows();
  if (static_cast<int>(x.cols()) != dims_.input_width)
    throw ShapeError("decode", {x.rows(), x.cols()},
                     {n, static_cast<std::size_t>(dims_.input_width)});
  if (static_cast<int>(i_prev.cols()) != dims_.summary_width ||
      static_cast<int>(i_next.cols()) != dims_.summary_width)
    throw ShapeError("decode", {i_prev.rows(), i_prev.cols()},
                     {1, static_cast<std::size_t>(dims_.summary_width)});
  const Cell& cell = forward_dir ? fw_ : bw_;

  // The x/I inputs are known for every step up front, so their projection
  // is one matmul; only the tag-vector feedback and the recurrent term
  // stay per-step.
  Value ctx = ops::concat_cols(
      {x, ops::broadcast_rows(i_prev, n), ops::broadcast_rows(i_next, n)});
  Value ctx_proj = ops::matmul(ctx, cell.w_ctx);

  std::size_t hd = dims_.hidden;
  Value h = Value::zeros(1, hd);
  Value c = Value::zeros(1, hd);
  Value y = Value::zeros(1, dims_.tag_dim);
  std::vector<Value> out(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t t = forward_dir ? step : n - 1 - step;
    Value pre = ops::add(ops::add(ops::slice_rows(ctx_proj, t, t + 1), ops::matmul(y, cell.w_tag)),
                         ops::matmul(h, cell.w_rec));
    if (dims_.cell == CellKind::lstm) {
      Value gates = ops::add(pre, cell.b);
      Value i = ops::sigmoid(ops::slice_cols(gates, 0, hd));
      Value f = ops::sigmoid(ops::slice_cols(gates, hd, 2 * hd));
      Value g = ops::tanh(ops::slice_cols(gates, 2 * hd, 3 * hd));
      Value o = ops::sigmoid(ops::slice_cols(gates, 3 * hd, 4 * hd));
      c = ops::add(ops::mul(f, c), ops::mul(i, g));
      h = ops::mul(o, ops::tanh(c));
    } else {
      h = ops::tanh(ops::add(pre, cell.b));
    }
    Value proj = ops::add(ops::matmul(h, w_proj_), b_proj_);
    switch (dims_.transform) {
      case TagTransform::identity: y = proj; break;
      case TagTransform::tanh: y = ops::tanh(proj); break;
      case TagTransform::sigmoid: y = ops::sigmoid(proj); break;
    }
    out[t] = y;
  }
  return n == 1 ? out[0] : ops::concat_rows(out);
}

Value BiDecoder::decode(const Value& x, const Value& i_prev, const Value& i_next,
                        Direction mode) const {
  std::size_t n = x.rows();
  Value zeros = Value::zeros(n, dims_.tag_dim);
  switch (mode) {
    case Direction::forward:
      return ops::concat_cols({decode_direction(true, x, i_prev, i_next), zeros});
    case Direction::backward:
      return ops::concat_cols({zeros, decode_direction(false, x, i_prev, i_next)});
    case Direction::bidirectional:
      return ops::concat_cols({decode_direction(true, x, i_prev, i_next),
                               decode_direction(false, x, i_prev, i_next)});
  }
  throw ConfigError("unknown decoder direction mode");
}

}  // namespace mlbinet::nn
