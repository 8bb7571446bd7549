#include "mlbinet/encoder.hpp"

#include "mlbinet/errors.hpp"

namespace mlbinet::nn {

namespace ops = mlbinet::ad;

Encoder::Encoder(ParamStore& store, const EncoderDims& dims, Rng& rng) : dims_(dims) {
  // Word rows start at the OOV scale so rows without pretrained vectors
  // keep that distribution; the pad row stays zero (never updated because
  // pad tokens never enter a graph).
  word_table_ = store.create("encoder.word_emb", dims.vocab_words, dims.word_dim, true, false);
  {
    auto& w = word_table_.data();
    for (std::size_t i = dims.word_dim; i < w.size(); ++i) w[i] = rng.uniform(-0.01, 0.01);
  }
  entity_table_ =
      store.create("encoder.entity_emb", dims.vocab_entities, dims.entity_dim, true, false);
  {
    auto& w = entity_table_.data();
    for (std::size_t i = dims.entity_dim; i < w.size(); ++i) w[i] = rng.uniform(-0.08, 0.08);
  }
  if (dims.entity_subtype_dim > 0) {
    subtype_table_ = store.create("encoder.subtype_emb", dims.vocab_subtypes,
                                  dims.entity_subtype_dim, true, false);
    auto& w = subtype_table_.data();
    for (std::size_t i = dims.entity_subtype_dim; i < w.size(); ++i) w[i] = rng.uniform(-0.08, 0.08);
  }
  fw_ = make_lstm(store, "encoder.fw", dims.embed_width(), dims.hidden, rng);
  bw_ = make_lstm(store, "encoder.bw", dims.embed_width(), dims.hidden, rng);
  w_sa_ = store.create_uniform("encoder.attn.w_sa", 2 * dims.hidden, 2 * dims.hidden, rng,
                               -0.08, 0.08);
  b_sa_ = store.create("encoder.attn.b_sa", 1, 1, true, false);
}

Value Encoder::embed(const std::vector<int>& word_ids, const std::vector<int>& entity_ids,
                     const std::vector<int>& subtype_ids) const {
  if (word_ids.size() != entity_ids.size())
    throw ShapeError("embed", "word and entity id lists differ in length");
  std::vector<Value> parts{ops::gather_rows(word_table_, word_ids),
                           ops::gather_rows(entity_table_, entity_ids)};
  if (dims_.entity_subtype_dim > 0) {
    if (subtype_ids.size() != word_ids.size())
      throw ShapeError("embed", "subtype id list differs in length");
    parts.push_back(ops::gather_rows(subtype_table_, subtype_ids));
  }
  return ops::concat_cols(parts);
}

Value Encoder::bilstm(const Value& e_seq) const {
  std::size_t n = e_seq.rows();
  Value fwd = lstm_run(fw_, e_seq);
  // Backward half: run the reversed sequence and restore order.
  std::vector<Value> rev_rows;
  rev_rows.reserve(n);
  for (std::size_t t = n; t > 0; --t) rev_rows.push_back(ops::slice_rows(e_seq, t - 1, t));
  Value bwd_rev = lstm_run(bw_, n == 1 ? rev_rows[0] : ops::concat_rows(rev_rows));
  std::vector<Value> bwd_rows;
  bwd_rows.reserve(n);
  for (std::size_t t = n; t > 0; --t) bwd_rows.push_back(ops::slice_rows(bwd_rev, t - 1, t));
  Value bwd = n == 1 ? bwd_rows[0] : ops::concat_rows(bwd_rows);
  return ops::concat_cols({fwd, bwd});
}

Encoder::Attention Encoder::self_attention(const Value& h_seq) const {
  if (h_seq.rows() == 0) throw ShapeError("self_attention", "sentence with zero real tokens");
  Value scores = ops::tanh(ops::add(ops::matmul_nt(ops::matmul(h_seq, w_sa_), h_seq), b_sa_));
  Value weights = ops::softmax_rows(scores);
  return {weights, ops::matmul(weights, h_seq)};
}

Value Encoder::encode(const data::Sentence& sentence, bool train, double dropout,
                      bool dropout_embed, Rng* dropout_rng) const {
  if (sentence.real_length == 0)
    throw ShapeError("encode_sentence", "sentence with zero real tokens");
  Value e = embed(sentence.word_ids, sentence.entity_ids, sentence.subtype_ids);
  if (train && dropout_embed && dropout > 0.0)
    e = ops::dropout(e, dropout, true, *dropout_rng);
  Value h = bilstm(e);
  Value ha = self_attention(h).output;
  return ops::concat_cols({ha, e});
}

}  // namespace mlbinet::nn
