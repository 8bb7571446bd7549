#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mlbinet/rng.hpp"

namespace mlbinet::data {

// Token index span, end exclusive.
struct Span {
  int start = 0;
  int end = 0;
  std::string type;

  friend bool operator==(const Span& a, const Span& b) {
    return a.start == b.start && a.end == b.end && a.type == b.type;
  }
  friend bool operator<(const Span& a, const Span& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    return a.type < b.type;
  }
};

// ---------------------------------------------------------------------------
// BIO tags. Decoding is total: a bare I_x opens a span, a type change or an
// O closes the current one, so any tag sequence maps to a valid span set.

std::vector<std::string> bio_encode(const std::vector<Span>& spans, int length);
std::vector<Span> bio_decode(const std::vector<std::string>& tags);

// "O" plus B_x/I_x per event type; index 0 is always "O".
class TagVocab {
 public:
  TagVocab() = default;
  explicit TagVocab(std::vector<std::string> event_types);

  int size() const { return static_cast<int>(tags_.size()); }  // M = 2E+1
  const std::string& tag(int index) const { return tags_.at(index); }
  int index(const std::string& tag) const;

  const std::vector<std::string>& event_types() const { return event_types_; }
  const std::vector<std::string>& tags() const { return tags_; }

  int b_tag(int type_index) const { return 1 + 2 * type_index; }
  int i_tag(int type_index) const { return 2 + 2 * type_index; }

  std::vector<int> encode_ids(const std::vector<Span>& spans, int length) const;
  std::vector<Span> decode_ids(const std::vector<int>& tag_ids) const;

 private:
  std::vector<std::string> event_types_;
  std::vector<std::string> tags_;
  std::unordered_map<std::string, int> index_;
};

// ---------------------------------------------------------------------------
// Word / entity-label vocabularies. Index 0 is the padding row, index 1 the
// unknown token; both are reserved and never produced by build() items.

class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocab() = default;
  static Vocab build(std::vector<std::string> items);  // sorted, deduplicated

  int index(const std::string& item) const;  // kUnk when absent
  const std::string& item(int index) const { return items_.at(index); }
  int size() const { return static_cast<int>(items_.size()); }

  // Newline-joined entries after the reserved two; used by checkpoints.
  std::string to_text() const;
  static Vocab from_text(const std::string& text);

 private:
  std::vector<std::string> items_;
  std::unordered_map<std::string, int> index_;
};

// ---------------------------------------------------------------------------
// Corpus structures. Raw documents mirror the input file; processed
// Documents are fixed S x L windows ready for the model.

struct RawSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> entity_types;     // "NONE" when absent
  std::vector<std::string> entity_subtypes;  // optional second feature
  std::vector<Span> triggers;
};

struct RawDocument {
  std::string doc_id;
  std::vector<RawSentence> sentences;
};

struct Token {
  std::string surface;
  std::string entity_type = "NONE";
  std::string entity_subtype = "NONE";
  std::string gold_tag = "O";
  bool is_pad = false;
};

struct Sentence {
  std::vector<Token> tokens;  // exactly L entries
  int real_length = 0;
  int orig_index = 0;           // sentence index in the original document
  std::vector<Span> gold_spans;  // untruncated; spans beyond L still count as misses
  // Attached by index_documents(), length == real_length:
  std::vector<int> word_ids, entity_ids, subtype_ids, gold_ids;
};

struct Document {
  std::string doc_id;
  int window_index = 0;
  std::vector<Sentence> sentences;  // exactly S entries
  int real_sentence_count = 0;
};

// One JSON object per line:
// {"doc_id": ..., "sentences": [{"tokens": [...], "entity_types": [...],
//  "triggers": [{"start":, "end":, "type":}]}]}
// Rejects overlapping or out-of-range trigger spans and empty documents,
// reporting the offending line.
std::vector<RawDocument> load_corpus(const std::string& path);
void write_corpus(const std::vector<RawDocument>& docs, const std::string& path);

// Splits each document into consecutive windows of S sentences (last window
// padded with empty pad sentences) and truncates or pads every sentence to
// L tokens. Gold tags for truncated tokens are dropped; the original spans
// are kept on the sentence for scoring.
std::vector<Document> chunk_and_pad(const std::vector<RawDocument>& docs, int S, int L);

struct CorpusVocabs {
  Vocab words;
  Vocab entities;
  Vocab subtypes;
  TagVocab tags;
};

CorpusVocabs build_vocabs(const std::vector<RawDocument>& docs);

// Fills the per-sentence id arrays used by the model.
void index_documents(std::vector<Document>& docs, const CorpusVocabs& vocabs);

// ---------------------------------------------------------------------------
// Pretrained word vectors, text format: header "V D" then V lines of
// "word v1 ... vD". Returns vectors for words that appear in the file.

struct EmbeddingFile {
  int dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
};

EmbeddingFile load_embedding_file(const std::string& path, int expected_dim);

// Overwrites the rows of in-file vocabulary words inside a V x dim
// row-major table. Rows of absent words (and the pad/unk rows) are left as
// initialized by the caller.
void apply_pretrained(std::vector<double>& table, int dim, const Vocab& words,
                      const EmbeddingFile& file);

}  // namespace mlbinet::data
