#include "mlbinet/synth.hpp"

#include <algorithm>
#include <filesystem>

#include "mlbinet/errors.hpp"

namespace mlbinet::data {

namespace {

std::string num_name(const std::string& prefix, int i) {
  std::string n = std::to_string(i);
  while (n.size() < 2) n = "0" + n;
  return prefix + n;
}

}  // namespace

void SynthConfig::validate() const {
  if (vocab_size < 1 || event_types < 1 || sentences_per_doc < 1 || tokens_per_sentence < 3)
    throw ConfigError("synthetic corpus: sizes must be positive (and sentences >= 3 tokens)");
  if (docs_train < 1) throw ConfigError("synthetic corpus: need at least one training document");
  if (trigger_words < 1) throw ConfigError("synthetic corpus: need at least one trigger word");
  if (trigger_words < event_types)
    throw ConfigError("synthetic corpus: more event types than trigger words to carry them");
  if (ambiguous_words > 0 && event_types < 2)
    throw ConfigError("synthetic corpus: ambiguity needs at least two event types");
  if (ambiguous_words > 0 && cue_distance >= sentences_per_doc)
    throw ConfigError("synthetic corpus: cue distance exceeds document length");
  if (cue_distance < 1) throw ConfigError("synthetic corpus: cue distance must be >= 1");
  int reserved = trigger_words + (trigger_words + 3) / 4  // extra tokens of two-token triggers
                 + ambiguous_words + 2;                   // shared cue pair
  int fillers = vocab_size - reserved;
  if (fillers < 8)
    throw ConfigError("synthetic corpus: vocabulary too small for the trigger inventory (" +
                      std::to_string(reserved) + " reserved words, need >= 8 fillers)");
  for (double p : {p_trigger, p_pair, p_ambiguous, p_entity})
    if (p < 0.0 || p > 1.0) throw ConfigError("synthetic corpus: probabilities must be in [0, 1]");
}

SynthInventory make_inventory(const SynthConfig& cfg) {
  cfg.validate();
  SynthInventory inv;
  for (int i = 0; i < cfg.event_types; ++i) inv.event_types.push_back(num_name("Evt", i));
  for (int i = 0; i < cfg.entity_types; ++i) inv.entity_labels.push_back(num_name("Ent", i));

  for (int i = 0; i < cfg.trigger_words; ++i) {
    SynthInventory::Trigger t;
    t.word = num_name("trig", i);
    if (i % 4 == 3) t.extra = t.word + "x";  // every fourth trigger spans two tokens
    t.type = inv.event_types[i % cfg.event_types];
    t.partner = (i % 2 == 0) ? std::min(i + 1, cfg.trigger_words - 1) : i - 1;
    inv.triggers.push_back(std::move(t));
  }
  for (int i = 0; i < cfg.ambiguous_words; ++i) {
    SynthInventory::Ambiguous a;
    a.word = num_name("amb", i);
    a.type_a = inv.event_types[(2 * i) % cfg.event_types];
    a.type_b = inv.event_types[(2 * i + 1) % cfg.event_types];
    inv.ambiguous.push_back(std::move(a));
  }
  inv.cue_a = "cuealpha";
  inv.cue_b = "cuebeta";

  int reserved = static_cast<int>(inv.triggers.size()) + cfg.ambiguous_words + 2;
  for (const auto& t : inv.triggers)
    if (!t.extra.empty()) ++reserved;
  for (int i = 0; i < cfg.vocab_size - reserved; ++i) inv.fillers.push_back(num_name("w", i));
  return inv;
}

bool SynthInventory::is_ambiguous_word(const std::string& w) const {
  for (const auto& a : ambiguous)
    if (a.word == w) return true;
  return false;
}

namespace {

struct PlannedSentence {
  std::vector<int> trigger_plants;        // indices into inventory.triggers
  int ambiguous_plant = -1;               // index into inventory.ambiguous
  bool ambiguous_takes_a = false;
  int cue = 0;                            // 0 none, 1 cue_a, 2 cue_b
};

RawDocument make_document(const SynthConfig& cfg, const SynthInventory& inv, Rng& rng,
                          const std::string& doc_id) {
  int S = cfg.sentences_per_doc;
  std::vector<PlannedSentence> plan(S);
  for (int i = 0; i < S; ++i) {
    // Ambiguous trigger whose cue lands cue_distance sentences later.
    if (!inv.ambiguous.empty() && i + cfg.cue_distance < S && rng.bernoulli(cfg.p_ambiguous)) {
      plan[i].ambiguous_plant = rng.uniform_int(0, static_cast<int>(inv.ambiguous.size()) - 1);
      plan[i].ambiguous_takes_a = rng.bernoulli(0.5);
      plan[i + cfg.cue_distance].cue = plan[i].ambiguous_takes_a ? 1 : 2;
    }
    if (rng.bernoulli(cfg.p_trigger)) {
      int t = rng.uniform_int(0, static_cast<int>(inv.triggers.size()) - 1);
      plan[i].trigger_plants.push_back(t);
      int partner = inv.triggers[t].partner;
      if (partner != t && rng.bernoulli(cfg.p_pair)) plan[i].trigger_plants.push_back(partner);
    }
  }

  RawDocument doc;
  doc.doc_id = doc_id;
  for (int i = 0; i < S; ++i) {
    RawSentence s;
    int len = cfg.tokens_per_sentence;
    s.tokens.resize(len);
    for (auto& w : s.tokens)
      w = inv.fillers[rng.uniform_int(0, static_cast<int>(inv.fillers.size()) - 1)];

    std::vector<bool> used(len, false);
    auto free_slot = [&](int width) {
      // Up to a handful of attempts; crowded sentences just drop the plant.
      for (int attempt = 0; attempt < 8; ++attempt) {
        int pos = rng.uniform_int(0, len - width);
        bool ok = true;
        for (int k = 0; k < width; ++k) ok = ok && !used[pos + k];
        if (ok) {
          for (int k = 0; k < width; ++k) used[pos + k] = true;
          return pos;
        }
      }
      return -1;
    };

    if (plan[i].cue != 0) {
      int pos = free_slot(1);
      if (pos >= 0) s.tokens[pos] = plan[i].cue == 1 ? inv.cue_a : inv.cue_b;
      // The plant always finds room in a fresh sentence; keep the plan as is.
    }
    if (plan[i].ambiguous_plant >= 0) {
      const auto& a = inv.ambiguous[plan[i].ambiguous_plant];
      int pos = free_slot(1);
      if (pos >= 0) {
        s.tokens[pos] = a.word;
        s.triggers.push_back({pos, pos + 1, plan[i].ambiguous_takes_a ? a.type_a : a.type_b});
      } else {
        plan[i + cfg.cue_distance].cue = 0;  // no trigger planted, drop the cue
      }
    }
    for (int t : plan[i].trigger_plants) {
      const auto& trig = inv.triggers[t];
      int width = trig.extra.empty() ? 1 : 2;
      int pos = free_slot(width);
      if (pos < 0) continue;
      s.tokens[pos] = trig.word;
      if (width == 2) s.tokens[pos + 1] = trig.extra;
      s.triggers.push_back({pos, pos + width, trig.type});
    }
    std::sort(s.triggers.begin(), s.triggers.end());

    s.entity_types.assign(len, "NONE");
    for (auto& e : s.entity_types)
      if (rng.bernoulli(cfg.p_entity))
        e = inv.entity_labels[rng.uniform_int(0, static_cast<int>(inv.entity_labels.size()) - 1)];
    s.entity_subtypes.assign(len, "NONE");
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

std::vector<RawDocument> make_split(const SynthConfig& cfg, const SynthInventory& inv,
                                    Rng rng, int count, const std::string& prefix) {
  std::vector<RawDocument> docs;
  docs.reserve(count);
  for (int i = 0; i < count; ++i)
    docs.push_back(make_document(cfg, inv, rng, prefix + std::to_string(i)));
  return docs;
}

}  // namespace

SynthCorpus generate_synthetic(const SynthConfig& cfg, std::uint64_t seed) {
  SynthInventory inv = make_inventory(cfg);
  Rng base(seed);
  SynthCorpus corpus;
  corpus.train = make_split(cfg, inv, base.fork(11), cfg.docs_train, "train-");
  corpus.dev = make_split(cfg, inv, base.fork(22), cfg.docs_dev, "dev-");
  corpus.test = make_split(cfg, inv, base.fork(33), cfg.docs_test, "test-");
  return corpus;
}

void write_synthetic(const SynthCorpus& corpus, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_corpus(corpus.train, out_dir + "/train.jsonl");
  write_corpus(corpus.dev, out_dir + "/dev.jsonl");
  write_corpus(corpus.test, out_dir + "/test.jsonl");
}

}  // namespace mlbinet::data
