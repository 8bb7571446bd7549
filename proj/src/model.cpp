#include "mlbinet/model.hpp"

#include <cmath>

#include "mlbinet/errors.hpp"

namespace mlbinet::nn {

namespace ops = mlbinet::ad;
using ad::Value;

int ModelConfig::summary_width() const {
  switch (agg) {
    case AggMode::lstm: return agg_hidden;
    case AggMode::concat: return 2 * tag_width();
    default: return tag_width();
  }
}

void ModelConfig::validate() const {
  if (layers < 1) throw ConfigError("layers must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in (0, 1]");
  if (tag_classes < 2) throw ConfigError("need at least 2 tag classes");
  if (word_dim < 1 || entity_dim < 1 || encoder_hidden < 1 || decoder_hidden < 1 ||
      tag_dim < 1 || agg_hidden < 1)
    throw ConfigError("model dimensions must be positive");
  if (sentences_per_doc < 1 || sentence_length < 1)
    throw ConfigError("document window sizes must be positive");
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must be in [0, 1)");
  if (vocab_words < 2 || vocab_entities < 2)
    throw ConfigError("model requires corpus vocabularies");
}

std::vector<double> ModelConfig::to_doubles() const {
  return {static_cast<double>(layers),
          alpha,
          static_cast<double>(static_cast<int>(direction)),
          static_cast<double>(static_cast<int>(agg)),
          static_cast<double>(static_cast<int>(tag_transform)),
          static_cast<double>(static_cast<int>(decoder_cell)),
          static_cast<double>(word_dim),
          static_cast<double>(entity_dim),
          static_cast<double>(entity_subtype_dim),
          static_cast<double>(encoder_hidden),
          static_cast<double>(decoder_hidden),
          static_cast<double>(tag_dim),
          static_cast<double>(agg_hidden),
          static_cast<double>(sentences_per_doc),
          static_cast<double>(sentence_length),
          dropout,
          dropout_embed ? 1.0 : 0.0,
          dropout_context ? 1.0 : 0.0,
          static_cast<double>(vocab_words),
          static_cast<double>(vocab_entities),
          static_cast<double>(vocab_subtypes),
          static_cast<double>(tag_classes)};
}

ModelConfig ModelConfig::from_doubles(const std::vector<double>& v) {
  if (v.size() != 22) throw DataError("checkpoint: malformed model config record");
  ModelConfig c;
  std::size_t i = 0;
  c.layers = static_cast<int>(v[i++]);
  c.alpha = v[i++];
  c.direction = static_cast<Direction>(static_cast<int>(v[i++]));
  c.agg = static_cast<AggMode>(static_cast<int>(v[i++]));
  c.tag_transform = static_cast<TagTransform>(static_cast<int>(v[i++]));
  c.decoder_cell = static_cast<CellKind>(static_cast<int>(v[i++]));
  c.word_dim = static_cast<int>(v[i++]);
  c.entity_dim = static_cast<int>(v[i++]);
  c.entity_subtype_dim = static_cast<int>(v[i++]);
  c.encoder_hidden = static_cast<int>(v[i++]);
  c.decoder_hidden = static_cast<int>(v[i++]);
  c.tag_dim = static_cast<int>(v[i++]);
  c.agg_hidden = static_cast<int>(v[i++]);
  c.sentences_per_doc = static_cast<int>(v[i++]);
  c.sentence_length = static_cast<int>(v[i++]);
  c.dropout = v[i++];
  c.dropout_embed = v[i++] != 0.0;
  c.dropout_context = v[i++] != 0.0;
  c.vocab_words = static_cast<int>(v[i++]);
  c.vocab_entities = static_cast<int>(v[i++]);
  c.vocab_subtypes = static_cast<int>(v[i++]);
  c.tag_classes = static_cast<int>(v[i++]);
  return c;
}

namespace {

EncoderDims encoder_dims(const ModelConfig& c) {
  EncoderDims d;
  d.vocab_words = c.vocab_words;
  d.vocab_entities = c.vocab_entities;
  d.vocab_subtypes = c.vocab_subtypes;
  d.word_dim = c.word_dim;
  d.entity_dim = c.entity_dim;
  d.entity_subtype_dim = c.entity_subtype_dim;
  d.hidden = c.encoder_hidden;
  return d;
}

DecoderDims decoder_dims(const ModelConfig& c) {
  DecoderDims d;
  d.input_width = encoder_dims(c).output_width();
  d.summary_width = c.summary_width();
  d.hidden = c.decoder_hidden;
  d.tag_dim = c.tag_dim;
  d.cell = c.decoder_cell;
  d.transform = c.tag_transform;
  return d;
}

}  // namespace

Model::Model(const ModelConfig& config, data::CorpusVocabs vocabs, std::uint64_t seed)
    : config_([&] {
        ModelConfig c = config;
        c.vocab_words = vocabs.words.size();
        c.vocab_entities = vocabs.entities.size();
        c.vocab_subtypes = vocabs.subtypes.size();
        c.tag_classes = vocabs.tags.size();
        c.validate();
        return c;
      }()),
      vocabs_(std::move(vocabs)),
      store_(),
      encoder_([&]() -> Encoder {
        Rng rng = Rng(seed).fork(101);
        return Encoder(store_, encoder_dims(config_), rng);
      }()),
      decoder_([&]() -> BiDecoder {
        Rng rng = Rng(seed).fork(102);
        return BiDecoder(store_, decoder_dims(config_), rng);
      }()),
      aggregator_([&]() -> Aggregator {
        Rng rng = Rng(seed).fork(103);
        return Aggregator(store_, config_.agg, config_.tag_width(), config_.agg_hidden, rng);
      }()) {
  Rng rng = Rng(seed).fork(104);
  w_out_ = store_.create_uniform("output.w", config_.tag_width(), config_.tag_classes, rng,
                                 -0.08, 0.08);
  b_out_ = store_.create("output.b", 1, config_.tag_classes, true, false);
}

std::vector<Value> Model::forward_document(const data::Document& doc, bool train,
                                           Rng* dropout_rng, Trace* trace) const {
  int R = doc.real_sentence_count;
  if (R < 1) throw ShapeError("forward_document", "document with no real sentences");
  if (train && config_.dropout > 0.0 && !dropout_rng)
    throw ConfigError("training forward pass needs a dropout rng");

  // x_t is layer-invariant; encode once and reuse across layers.
  std::vector<Value> xs(R);
  for (int i = 0; i < R; ++i) {
    xs[i] = encoder_.encode(doc.sentences[i], train, config_.dropout, config_.dropout_embed,
                            dropout_rng);
    if (train && config_.dropout_context && config_.dropout > 0.0)
      xs[i] = ops::dropout(xs[i], config_.dropout, true, *dropout_rng);
  }

  Value zero_summary = Value::zeros(1, config_.summary_width());
  std::vector<Value> prev(R, zero_summary);  // layer 0: no cross-sentence information
  std::vector<std::vector<Value>> layer_tags(config_.layers, std::vector<Value>(R));
  for (int k = 0; k < config_.layers; ++k) {
    std::vector<Value> cur(R);
    for (int i = 0; i < R; ++i) {
      const Value& i_prev = i > 0 ? prev[i - 1] : zero_summary;
      const Value& i_next = i + 1 < R ? prev[i + 1] : zero_summary;
      Value y = decoder_.decode(xs[i], i_prev, i_next, config_.direction);
      layer_tags[k][i] = y;
      cur[i] = aggregator_.aggregate(y, doc.sentences[i].real_length);
    }
    if (trace) trace->summaries.push_back(cur);
    prev = std::move(cur);
  }

  std::vector<Value> logits(R);
  std::vector<Value> combined(R);
  for (int i = 0; i < R; ++i) {
    Value acc = layer_tags[0][i];
    double w = 1.0;
    for (int k = 1; k < config_.layers; ++k) {
      w *= config_.alpha;
      acc = ops::add(acc, w == 1.0 ? layer_tags[k][i] : ops::scale(layer_tags[k][i], w));
    }
    combined[i] = acc;
    logits[i] = ops::add(ops::matmul(acc, w_out_), b_out_);
  }
  if (trace) {
    trace->layer_tags = std::move(layer_tags);
    trace->combined = combined;
  }
  return logits;
}

Value Model::loss_from_logits(const std::vector<Value>& logits, const data::Document& doc) const {
  Value total = Value::zeros(1, 1);
  int M = config_.tag_classes;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const data::Sentence& s = doc.sentences[i];
    std::size_t n = logits[i].rows();
    std::vector<double> onehot(n * M, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      int gold = s.gold_ids[t];
      if (gold < 0 || gold >= M)
        throw DataError("gold tag id out of range: " + std::to_string(gold));
      onehot[t * M + gold] = 1.0;
    }
    Value picked =
        ops::mul(Value::from(n, M, std::move(onehot)), ops::log(ops::softmax_rows(logits[i])));
    total = ops::add(total, ops::sum(picked));
  }
  return ops::scale(total, -1.0);
}

Value Model::document_loss(const data::Document& doc, bool train, Rng* dropout_rng) const {
  return loss_from_logits(forward_document(doc, train, dropout_rng), doc);
}

std::vector<std::vector<data::Span>> Model::predict(const data::Document& doc) const {
  std::vector<Value> logits = forward_document(doc, false);
  std::vector<std::vector<data::Span>> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    std::vector<int> ids = ops::argmax_rows(logits[i]);
    out[i] = vocabs_.tags.decode_ids(ids);
    ops::release_graph(logits[i]);
  }
  return out;
}

void Model::apply_pretrained_embeddings(const data::EmbeddingFile& file) {
  Value table = store_.get("encoder.word_emb");
  data::apply_pretrained(table.data(), config_.word_dim, vocabs_.words, file);
}

void Model::save(const std::string& path) const {
  std::vector<ad::ckpt::Record> records;
  records.push_back({"__config__", {static_cast<std::uint64_t>(config_.to_doubles().size())},
                     config_.to_doubles()});
  auto text_record = [](const std::string& name, const std::string& text) {
    ad::ckpt::Record r;
    r.name = name;
    r.data = ad::ckpt::encode_text(text);
    r.dims = {r.data.size()};
    return r;
  };
  records.push_back(text_record("__vocab.words__", vocabs_.words.to_text()));
  records.push_back(text_record("__vocab.entities__", vocabs_.entities.to_text()));
  records.push_back(text_record("__vocab.subtypes__", vocabs_.subtypes.to_text()));
  std::string types;
  for (std::size_t i = 0; i < vocabs_.tags.event_types().size(); ++i) {
    if (i > 0) types += '\n';
    types += vocabs_.tags.event_types()[i];
  }
  records.push_back(text_record("__vocab.event_types__", types));
  for (auto& r : ad::to_records(store_)) records.push_back(std::move(r));
  ad::ckpt::write_file(path, records);
}

Model Model::load(const std::string& path) {
  std::vector<ad::ckpt::Record> records = ad::ckpt::read_file(path);
  const ad::ckpt::Record* config_rec = nullptr;
  std::map<std::string, const ad::ckpt::Record*> meta;
  for (const auto& r : records) {
    if (r.name == "__config__") config_rec = &r;
    if (r.name.rfind("__vocab.", 0) == 0) meta[r.name] = &r;
  }
  if (!config_rec) throw DataError("checkpoint has no model config record: " + path);
  for (const char* key : {"__vocab.words__", "__vocab.entities__", "__vocab.subtypes__",
                          "__vocab.event_types__"})
    if (!meta.count(key)) throw DataError(std::string("checkpoint has no ") + key + " record");

  ModelConfig config = ModelConfig::from_doubles(config_rec->data);
  data::CorpusVocabs vocabs;
  vocabs.words = data::Vocab::from_text(ad::ckpt::decode_text(meta["__vocab.words__"]->data));
  vocabs.entities =
      data::Vocab::from_text(ad::ckpt::decode_text(meta["__vocab.entities__"]->data));
  vocabs.subtypes =
      data::Vocab::from_text(ad::ckpt::decode_text(meta["__vocab.subtypes__"]->data));
  std::string types_text = ad::ckpt::decode_text(meta["__vocab.event_types__"]->data);
  std::vector<std::string> types;
  if (!types_text.empty()) {
    std::size_t pos = 0;
    while (pos != std::string::npos) {
      std::size_t next = types_text.find('\n', pos);
      types.push_back(types_text.substr(pos, next == std::string::npos ? next : next - pos));
      pos = next == std::string::npos ? next : next + 1;
    }
  }
  vocabs.tags = data::TagVocab(types);

  Model model(config, std::move(vocabs), /*seed=*/0);
  load_records(model.store_, records);
  return model;
}

}  // namespace mlbinet::nn
