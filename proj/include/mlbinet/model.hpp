#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlbinet/aggregator.hpp"
#include "mlbinet/data.hpp"
#include "mlbinet/decoder.hpp"
#include "mlbinet/encoder.hpp"
#include "mlbinet/param_store.hpp"

namespace mlbinet::nn {

struct ModelConfig {
  int layers = 2;
  double alpha = 1.0;  // layer weight decay for the combined tag vector
  Direction direction = Direction::bidirectional;
  AggMode agg = AggMode::lstm;
  TagTransform tag_transform = TagTransform::tanh;
  CellKind decoder_cell = CellKind::lstm;

  int word_dim = 100;
  int entity_dim = 20;
  int entity_subtype_dim = 0;
  int encoder_hidden = 100;
  int decoder_hidden = 200;
  int tag_dim = 100;    // per-direction tag vector width
  int agg_hidden = 100;

  int sentences_per_doc = 8;
  int sentence_length = 50;

  double dropout = 0.5;
  bool dropout_embed = true;
  bool dropout_context = true;

  // Filled in from the corpus vocabularies before the model is built.
  int vocab_words = 0;
  int vocab_entities = 0;
  int vocab_subtypes = 0;
  int tag_classes = 0;  // M

  int tag_width() const { return 2 * tag_dim; }
  int summary_width() const;

  void validate() const;
  std::vector<double> to_doubles() const;
  static ModelConfig from_doubles(const std::vector<double>& v);
};

// The stacked bidirectional tagging network. One parameter set is shared
// by every layer; layer k feeds each sentence the neighbour summaries
// aggregated at layer k-1 (zero vectors at layer 1, document boundaries
// and pad sentences).
class Model {
 public:
  Model(const ModelConfig& config, data::CorpusVocabs vocabs, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  const data::CorpusVocabs& vocabs() const { return vocabs_; }
  ad::ParamStore& params() { return store_; }
  const ad::ParamStore& params() const { return store_; }
  const Encoder& encoder() const { return encoder_; }

  struct Trace {
    // [layer][real sentence] tag vectors and summaries, plus the decayed
    // combination per sentence.
    std::vector<std::vector<Value>> layer_tags;
    std::vector<std::vector<Value>> summaries;
    std::vector<Value> combined;
  };

  // Logits (n_i x M) for every real sentence of the document.
  std::vector<Value> forward_document(const data::Document& doc, bool train,
                                      Rng* dropout_rng = nullptr, Trace* trace = nullptr) const;

  // Negative log-likelihood summed over the document's non-pad tokens.
  Value document_loss(const data::Document& doc, bool train, Rng* dropout_rng = nullptr) const;
  Value loss_from_logits(const std::vector<Value>& logits, const data::Document& doc) const;

  // Argmax tags decoded to spans, one list per real sentence. Pad
  // positions never emit anything.
  std::vector<std::vector<data::Span>> predict(const data::Document& doc) const;

  void apply_pretrained_embeddings(const data::EmbeddingFile& file);

  void save(const std::string& path) const;
  static Model load(const std::string& path);

 private:
  ModelConfig config_;
  data::CorpusVocabs vocabs_;
  ad::ParamStore store_;
  Encoder encoder_;
  BiDecoder decoder_;
  Aggregator aggregator_;
  Value w_out_;  // tag_width x M
  Value b_out_;  // 1 x M

  static Encoder build_encoder(ad::ParamStore&, const ModelConfig&, Rng&);
};

}  // namespace mlbinet::nn
