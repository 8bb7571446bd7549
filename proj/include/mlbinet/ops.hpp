#pragma once

#include <vector>

#include "mlbinet/rng.hpp"
#include "mlbinet/value.hpp"

namespace mlbinet::ad {

// Every primitive computes its forward value eagerly and, when any input
// requires gradients, registers the matching reverse rule on the result
// node. Shape violations throw ShapeError naming the op and both shapes.

Value matmul(const Value& a, const Value& b);
// a @ b^T without materializing the transpose.
Value matmul_nt(const Value& a, const Value& b);

// Elementwise add. `b` may also be a 1xC row (broadcast over rows) or a
// 1x1 scalar (broadcast over everything).
Value add(const Value& a, const Value& b);
// Elementwise multiply, shapes must match exactly.
Value mul(const Value& a, const Value& b);

Value concat_cols(const std::vector<Value>& parts);
Value concat_rows(const std::vector<Value>& parts);
Value slice_cols(const Value& a, std::size_t lo, std::size_t hi);
Value slice_rows(const Value& a, std::size_t lo, std::size_t hi);

Value tanh(const Value& a);
Value sigmoid(const Value& a);
Value log(const Value& a);
Value softmax_rows(const Value& a);

// Picks table rows by index; gradients scatter-add back into the table.
Value gather_rows(const Value& table, const std::vector<int>& indices);

// Inverted dropout: at train time keeps entries with probability 1-p and
// scales by 1/(1-p); at inference it is the identity (returns the input
// handle unchanged).
Value dropout(const Value& a, double p, bool train, Rng& rng);

Value sum(const Value& a);
Value mean(const Value& a);
Value scale(const Value& a, double c);

// Row vector repeated n times; gradient sums back over the rows.
Value broadcast_rows(const Value& row, std::size_t n);

// Index of the max entry per row, lowest index on ties. Not a graph op.
std::vector<int> argmax_rows(const Value& a);

}  // namespace mlbinet::ad
