#pragma once

#include <string>

#include "mlbinet/lstm.hpp"

namespace mlbinet::nn {

enum class AggMode { lstm, concat, average };

AggMode parse_agg_mode(const std::string& s);
const char* to_string(AggMode m);

// Collapses a sentence's tag-vector sequence into one fixed-width summary
// for cross-sentence propagation. Pad steps never contribute: only the
// first real_length rows are read.
class Aggregator {
 public:
  // tag_width is the full (both halves) tag vector width.
  Aggregator(ParamStore& store, AggMode mode, int tag_width, int lstm_hidden, Rng& rng);

  int summary_width() const;
  AggMode mode() const { return mode_; }

  Value aggregate(const Value& tag_seq, int real_length) const;

 private:
  AggMode mode_;
  int tag_width_ = 0;
  int lstm_hidden_ = 0;
  LstmParams lstm_;  // only built in lstm mode
};

}  // namespace mlbinet::nn
