#include "mlbinet/data.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mlbinet/errors.hpp"

namespace mlbinet::data {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// BIO

namespace {

void check_spans(const std::vector<Span>& spans, int length) {
  std::vector<Span> sorted = spans;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Span& s = sorted[i];
    if (s.start < 0 || s.end > length || s.start >= s.end)
      throw DataError("span [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
                      ") out of range for sentence length " + std::to_string(length));
    if (i > 0 && sorted[i - 1].end > s.start)
      throw DataError("overlapping trigger spans at token " + std::to_string(s.start));
  }
}

}  // namespace

std::vector<std::string> bio_encode(const std::vector<Span>& spans, int length) {
  check_spans(spans, length);
  std::vector<std::string> tags(length, "O");
  for (const Span& s : spans) {
    tags[s.start] = "B_" + s.type;
    for (int t = s.start + 1; t < s.end; ++t) tags[t] = "I_" + s.type;
  }
  return tags;
}

std::vector<Span> bio_decode(const std::vector<std::string>& tags) {
  std::vector<Span> spans;
  int open_start = -1;
  std::string open_type;
  auto close = [&](int end) {
    if (open_start >= 0) spans.push_back({open_start, end, open_type});
    open_start = -1;
  };
  for (int t = 0; t < static_cast<int>(tags.size()); ++t) {
    const std::string& tag = tags[t];
    if (tag == "O") {
      close(t);
    } else if (tag.rfind("B_", 0) == 0) {
      close(t);
      open_start = t;
      open_type = tag.substr(2);
    } else if (tag.rfind("I_", 0) == 0) {
      std::string type = tag.substr(2);
      if (open_start < 0 || open_type != type) {
        close(t);
        open_start = t;
        open_type = type;
      }
    } else {
      throw DataError("unknown BIO tag: " + tag);
    }
  }
  close(static_cast<int>(tags.size()));
  return spans;
}

TagVocab::TagVocab(std::vector<std::string> event_types) : event_types_(std::move(event_types)) {
  tags_.push_back("O");
  for (const auto& t : event_types_) {
    tags_.push_back("B_" + t);
    tags_.push_back("I_" + t);
  }
  for (int i = 0; i < static_cast<int>(tags_.size()); ++i) index_[tags_[i]] = i;
  if (index_.size() != tags_.size()) throw DataError("duplicate event type in tag vocabulary");
}

int TagVocab::index(const std::string& tag) const {
  auto it = index_.find(tag);
  if (it == index_.end()) throw DataError("unknown tag: " + tag);
  return it->second;
}

std::vector<int> TagVocab::encode_ids(const std::vector<Span>& spans, int length) const {
  std::vector<std::string> tags = bio_encode(spans, length);
  std::vector<int> ids(tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) ids[i] = index(tags[i]);
  return ids;
}

std::vector<Span> TagVocab::decode_ids(const std::vector<int>& tag_ids) const {
  std::vector<Span> spans;
  int open_start = -1, open_type = -1;
  auto close = [&](int end) {
    if (open_start >= 0) spans.push_back({open_start, end, event_types_[open_type]});
    open_start = -1;
  };
  for (int t = 0; t < static_cast<int>(tag_ids.size()); ++t) {
    int id = tag_ids[t];
    if (id < 0 || id >= size()) throw DataError("tag id out of range: " + std::to_string(id));
    if (id == 0) {
      close(t);
      continue;
    }
    int type = (id - 1) / 2;
    bool is_b = (id - 1) % 2 == 0;
    if (is_b || open_start < 0 || open_type != type) {
      close(t);
      open_start = t;
      open_type = type;
    }
  }
  close(static_cast<int>(tag_ids.size()));
  return spans;
}

// ---------------------------------------------------------------------------
// Vocab

Vocab Vocab::build(std::vector<std::string> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  Vocab v;
  v.items_ = {"<pad>", "<unk>"};
  v.items_.insert(v.items_.end(), items.begin(), items.end());
  for (int i = 0; i < static_cast<int>(v.items_.size()); ++i) v.index_[v.items_[i]] = i;
  return v;
}

int Vocab::index(const std::string& item) const {
  auto it = index_.find(item);
  return it == index_.end() ? kUnk : it->second;
}

std::string Vocab::to_text() const {
  std::string out;
  for (std::size_t i = 2; i < items_.size(); ++i) {
    if (i > 2) out += '\n';
    out += items_[i];
  }
  return out;
}

Vocab Vocab::from_text(const std::string& text) {
  std::vector<std::string> items;
  if (!text.empty()) {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) items.push_back(line);
  }
  return build(std::move(items));
}

// ---------------------------------------------------------------------------
// Corpus IO

namespace {

std::vector<std::string> string_array(const json& j, const char* field, std::size_t line_no) {
  if (!j.is_array()) throw DataError("line " + std::to_string(line_no) + ": " + field +
                                     " must be an array of strings");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_string())
      throw DataError("line " + std::to_string(line_no) + ": " + field + " entries must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

RawSentence parse_sentence(const json& j, std::size_t line_no) {
  RawSentence s;
  if (!j.contains("tokens"))
    throw DataError("line " + std::to_string(line_no) + ": sentence without tokens");
  s.tokens = string_array(j.at("tokens"), "tokens", line_no);
  if (s.tokens.empty())
    throw DataError("line " + std::to_string(line_no) + ": sentence with zero tokens");
  if (j.contains("entity_types")) {
    s.entity_types = string_array(j.at("entity_types"), "entity_types", line_no);
    if (s.entity_types.size() != s.tokens.size())
      throw DataError("line " + std::to_string(line_no) +
                      ": entity_types length does not match tokens");
  } else {
    s.entity_types.assign(s.tokens.size(), "NONE");
  }
  if (j.contains("entity_subtypes")) {
    s.entity_subtypes = string_array(j.at("entity_subtypes"), "entity_subtypes", line_no);
    if (s.entity_subtypes.size() != s.tokens.size())
      throw DataError("line " + std::to_string(line_no) +
                      ": entity_subtypes length does not match tokens");
  } else {
    s.entity_subtypes.assign(s.tokens.size(), "NONE");
  }
  if (j.contains("triggers")) {
    for (const auto& t : j.at("triggers")) {
      Span span;
      span.start = t.at("start").get<int>();
      span.end = t.at("end").get<int>();
      span.type = t.at("type").get<std::string>();
      s.triggers.push_back(std::move(span));
    }
  }
  // Validates range and overlap up front so bad lines are reported here.
  try {
    check_spans(s.triggers, static_cast<int>(s.tokens.size()));
  } catch (const DataError& e) {
    throw DataError("line " + std::to_string(line_no) + ": " + e.what());
  }
  return s;
}

}  // namespace

std::vector<RawDocument> load_corpus(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open corpus: " + path);
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      RawDocument doc;
      doc.doc_id = j.at("doc_id").get<std::string>();
      const auto& sentences = j.at("sentences");
      if (!sentences.is_array() || sentences.empty())
        throw DataError("line " + std::to_string(line_no) + ": document with no sentences");
      for (const auto& sj : sentences) doc.sentences.push_back(parse_sentence(sj, line_no));
      docs.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

void write_corpus(const std::vector<RawDocument>& docs, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot open corpus for writing: " + path);
  for (const auto& doc : docs) {
    nlohmann::ordered_json j;
    j["doc_id"] = doc.doc_id;
    j["sentences"] = nlohmann::ordered_json::array();
    for (const auto& s : doc.sentences) {
      nlohmann::ordered_json sj;
      sj["tokens"] = s.tokens;
      sj["entity_types"] = s.entity_types;
      sj["triggers"] = nlohmann::ordered_json::array();
      for (const auto& t : s.triggers)
        sj["triggers"].push_back({{"start", t.start}, {"end", t.end}, {"type", t.type}});
      j["sentences"].push_back(std::move(sj));
    }
    os << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Chunking

namespace {

Sentence process_sentence(const RawSentence& raw, int orig_index, int L) {
  Sentence s;
  s.orig_index = orig_index;
  s.gold_spans = raw.triggers;
  std::sort(s.gold_spans.begin(), s.gold_spans.end());
  int n = static_cast<int>(raw.tokens.size());
  s.real_length = std::min(n, L);
  std::vector<std::string> tags = bio_encode(raw.triggers, n);
  s.tokens.resize(L);
  for (int t = 0; t < L; ++t) {
    Token& tok = s.tokens[t];
    if (t < s.real_length) {
      tok.surface = raw.tokens[t];
      tok.entity_type = raw.entity_types[t];
      tok.entity_subtype = raw.entity_subtypes[t];
      tok.gold_tag = tags[t];
    } else {
      tok.is_pad = true;
    }
  }
  return s;
}

Sentence pad_sentence(int L) {
  Sentence s;
  s.real_length = 0;
  s.orig_index = -1;
  s.tokens.resize(L);
  for (auto& tok : s.tokens) tok.is_pad = true;
  return s;
}

}  // namespace

std::vector<Document> chunk_and_pad(const std::vector<RawDocument>& docs, int S, int L) {
  if (S < 1 || L < 1) throw ConfigError("chunk_and_pad: S and L must be >= 1");
  std::vector<Document> out;
  for (const auto& raw : docs) {
    int n = static_cast<int>(raw.sentences.size());
    for (int start = 0, window = 0; start < n; start += S, ++window) {
      Document doc;
      doc.doc_id = raw.doc_id;
      doc.window_index = window;
      doc.real_sentence_count = std::min(S, n - start);
      for (int i = 0; i < S; ++i) {
        if (i < doc.real_sentence_count)
          doc.sentences.push_back(process_sentence(raw.sentences[start + i], start + i, L));
        else
          doc.sentences.push_back(pad_sentence(L));
      }
      out.push_back(std::move(doc));
    }
  }
  return out;
}

CorpusVocabs build_vocabs(const std::vector<RawDocument>& docs) {
  std::vector<std::string> words, entities, subtypes;
  std::set<std::string> types;
  for (const auto& doc : docs) {
    for (const auto& s : doc.sentences) {
      words.insert(words.end(), s.tokens.begin(), s.tokens.end());
      entities.insert(entities.end(), s.entity_types.begin(), s.entity_types.end());
      subtypes.insert(subtypes.end(), s.entity_subtypes.begin(), s.entity_subtypes.end());
      for (const auto& t : s.triggers) types.insert(t.type);
    }
  }
  CorpusVocabs v;
  v.words = Vocab::build(std::move(words));
  v.entities = Vocab::build(std::move(entities));
  v.subtypes = Vocab::build(std::move(subtypes));
  v.tags = TagVocab(std::vector<std::string>(types.begin(), types.end()));
  return v;
}

void index_documents(std::vector<Document>& docs, const CorpusVocabs& vocabs) {
  for (auto& doc : docs) {
    for (auto& s : doc.sentences) {
      s.word_ids.assign(s.real_length, 0);
      s.entity_ids.assign(s.real_length, 0);
      s.subtype_ids.assign(s.real_length, 0);
      s.gold_ids.assign(s.real_length, 0);
      for (int t = 0; t < s.real_length; ++t) {
        const Token& tok = s.tokens[t];
        s.word_ids[t] = vocabs.words.index(tok.surface);
        s.entity_ids[t] = vocabs.entities.index(tok.entity_type);
        s.subtype_ids[t] = vocabs.subtypes.index(tok.entity_subtype);
        s.gold_ids[t] = vocabs.tags.index(tok.gold_tag);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Embeddings

EmbeddingFile load_embedding_file(const std::string& path, int expected_dim) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open embeddings: " + path);
  std::string line;
  if (!std::getline(is, line)) throw DataError("embeddings: empty file " + path);
  std::istringstream header(line);
  long long v = 0, d = 0;
  if (!(header >> v >> d) || v < 0 || d <= 0)
    throw DataError("embeddings: malformed header line, expected \"V D\"");
  std::string extra;
  if (header >> extra) throw DataError("embeddings: malformed header line, expected \"V D\"");
  if (d != expected_dim)
    throw DataError("embeddings: dimension " + std::to_string(d) +
                    " does not match configured word dimension " + std::to_string(expected_dim));
  EmbeddingFile file;
  file.dim = static_cast<int>(d);
  for (long long row = 0; row < v; ++row) {
    if (!std::getline(is, line))
      throw DataError("embeddings: expected " + std::to_string(v) + " rows, file ended at row " +
                      std::to_string(row));
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word))
      throw DataError("embeddings: empty row at line " + std::to_string(row + 2));
    std::vector<double> vec(d);
    for (long long j = 0; j < d; ++j) {
      if (!(ss >> vec[j]))
        throw DataError("embeddings: row for \"" + word + "\" (line " +
                        std::to_string(row + 2) + ") has fewer than " + std::to_string(d) +
                        " values");
    }
    double trailing;
    if (ss >> trailing)
      throw DataError("embeddings: row for \"" + word + "\" (line " + std::to_string(row + 2) +
                      ") has more than " + std::to_string(d) + " values");
    file.vectors[word] = std::move(vec);
  }
  return file;
}

void apply_pretrained(std::vector<double>& table, int dim, const Vocab& words,
                      const EmbeddingFile& file) {
  if (file.dim != dim) throw DataError("embeddings: dimension mismatch");
  for (int i = 2; i < words.size(); ++i) {
    auto it = file.vectors.find(words.item(i));
    if (it == file.vectors.end()) continue;
    std::copy(it->second.begin(), it->second.end(), table.begin() + static_cast<long>(i) * dim);
  }
}

}  // namespace mlbinet::data
