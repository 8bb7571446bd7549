#pragma once

#include <vector>

#include "mlbinet/data.hpp"
#include "mlbinet/lstm.hpp"

namespace mlbinet::nn {

struct EncoderDims {
  int vocab_words = 0;
  int vocab_entities = 0;
  int vocab_subtypes = 0;  // rows of the optional second feature table
  int word_dim = 100;
  int entity_dim = 20;
  int entity_subtype_dim = 0;  // 0 disables the second table
  int hidden = 100;

  int embed_width() const { return word_dim + entity_dim + entity_subtype_dim; }
  int output_width() const { return 2 * hidden + embed_width(); }
};

// Per-sentence semantic encoder: embeddings -> BiLSTM -> bilinear
// self-attention -> x_t = [h^a_t; e_t]. Strictly sentence-local; all
// cross-sentence flow happens in the stacked tagging layers.
class Encoder {
 public:
  Encoder(ParamStore& store, const EncoderDims& dims, Rng& rng);

  // One embedding row per id; pad ids (0) hit the all-zero pad rows.
  Value embed(const std::vector<int>& word_ids, const std::vector<int>& entity_ids,
              const std::vector<int>& subtype_ids) const;

  // n x 2h; forward states in the left half, backward states in the right.
  Value bilstm(const Value& e_seq) const;

  struct Attention {
    Value weights;  // n x n rows summing to 1
    Value output;   // n x 2h
  };
  Attention self_attention(const Value& h_seq) const;

  // Full per-sentence pass over the non-pad tokens; dropout is applied to
  // the embeddings when train is set (and dropout_embed allows it).
  Value encode(const data::Sentence& sentence, bool train, double dropout, bool dropout_embed,
               Rng* dropout_rng) const;

  const EncoderDims& dims() const { return dims_; }
  Value word_table() const { return word_table_; }
  Value entity_table() const { return entity_table_; }

 private:
  EncoderDims dims_;
  Value word_table_;
  Value entity_table_;
  Value subtype_table_;  // undefined when entity_subtype_dim == 0
  LstmParams fw_, bw_;
  Value w_sa_;  // 2h x 2h bilinear attention weight
  Value b_sa_;  // 1 x 1 scalar bias
};

}  // namespace mlbinet::nn
