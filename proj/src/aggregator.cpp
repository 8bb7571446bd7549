#include "mlbinet/aggregator.hpp"

#include "mlbinet/errors.hpp"

namespace mlbinet::nn {

namespace ops = mlbinet::ad;

AggMode parse_agg_mode(const std::string& s) {
  if (s == "lstm") return AggMode::lstm;
  if (s == "concat") return AggMode::concat;
  if (s == "average") return AggMode::average;
  throw ConfigError("unknown aggregation mode: " + s);
}

const char* to_string(AggMode m) {
  switch (m) {
    case AggMode::lstm: return "lstm";
    case AggMode::concat: return "concat";
    default: return "average";
  }
}

Aggregator::Aggregator(ParamStore& store, AggMode mode, int tag_width, int lstm_hidden, Rng& rng)
    : mode_(mode), tag_width_(tag_width), lstm_hidden_(lstm_hidden) {
  if (mode_ == AggMode::lstm)
    lstm_ = make_lstm(store, "agg.lstm", tag_width, lstm_hidden, rng);
}

int Aggregator::summary_width() const {
  switch (mode_) {
    case AggMode::lstm: return lstm_hidden_;
    case AggMode::concat: return 2 * tag_width_;
    default: return tag_width_;
  }
}

Value Aggregator::aggregate(const Value& tag_seq, int real_length) const {
  if (real_length < 1) throw ShapeError("aggregate", "real_length must be >= 1");
  if (static_cast<std::size_t>(real_length) > tag_seq.rows())
    throw ShapeError("aggregate", "real_length exceeds tag rows");
  std::size_t n = static_cast<std::size_t>(real_length);
  Value y = n == tag_seq.rows() ? tag_seq : ops::slice_rows(tag_seq, 0, n);
  switch (mode_) {
    case AggMode::lstm: {
      Value states = lstm_run(lstm_, y);
      return n == 1 ? states : ops::slice_rows(states, n - 1, n);
    }
    case AggMode::concat:
      return ops::concat_cols(
          {ops::slice_rows(y, 0, 1), ops::slice_rows(y, n - 1, n)});
    default:
      // Mean over rows as a constant-weight matmul.
      return ops::matmul(Value::full(1, n, 1.0 / static_cast<double>(n)), y);
  }
}

}  // namespace mlbinet::nn
