#pragma once

#include <string>

#include "mlbinet/lstm.hpp"

namespace mlbinet::nn {

enum class Direction { forward, backward, bidirectional };
enum class TagTransform { identity, tanh, sigmoid };
enum class CellKind { lstm, rnn };

Direction parse_direction(const std::string& s);
TagTransform parse_tag_transform(const std::string& s);
CellKind parse_cell_kind(const std::string& s);
const char* to_string(Direction d);
const char* to_string(TagTransform f);
const char* to_string(CellKind c);

struct DecoderDims {
  int input_width = 0;    // x_t width
  int summary_width = 0;  // one neighbour summary; the cell sees two
  int hidden = 200;
  int tag_dim = 100;  // per-direction tag vector width
  CellKind cell = CellKind::lstm;
  TagTransform transform = TagTransform::tanh;
};

// Bidirectional tag-vector decoder. Each direction is a recurrent cell fed
// with [previous tag vector; x_t; I_prev; I_next]; the tag projection
// (w_tag_proj, b_tag_proj) is shared between the directions. Single
// direction modes zero-fill the other half so the output width is always
// 2 * tag_dim.
class BiDecoder {
 public:
  BiDecoder(ParamStore& store, const DecoderDims& dims, Rng& rng);

  // x is n x input_width; i_prev / i_next are 1 x summary_width. Returns
  // the n x tag_dim tag vectors of one direction, in sentence order.
  Value decode_direction(bool forward_dir, const Value& x, const Value& i_prev,
                         const Value& i_next) const;

  // n x 2*tag_dim per the direction mode.
  Value decode(const Value& x, const Value& i_prev, const Value& i_next, Direction mode) const;

  const DecoderDims& dims() const { return dims_; }

 private:
  struct Cell {
    Value w_tag;  // tag_dim x G
    Value w_ctx;  // (input_width + 2*summary_width) x G
    Value w_rec;  // hidden x G
    Value b;      // 1 x G   (G = 4*hidden for lstm, hidden for rnn)
  };

  Cell make_cell(ParamStore& store, const std::string& prefix, Rng& rng) const;
  std::size_t gate_width() const;

  DecoderDims dims_;
  Cell fw_, bw_;
  Value w_proj_;  // hidden x tag_dim, shared
  Value b_proj_;  // 1 x tag_dim
};

}  // namespace mlbinet::nn
