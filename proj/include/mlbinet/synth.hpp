#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlbinet/data.hpp"
#include "mlbinet/rng.hpp"

namespace mlbinet::data {

// Synthetic trigger-detection corpora with three planted phenomena:
//  - unambiguous trigger words, each tied to one event type (a few of them
//    are two-token phrases so I_ tags occur);
//  - intra-sentence co-occurrence: triggers come in fixed pairs and the
//    partner is planted in the same sentence with probability p_pair;
//  - cross-sentence ambiguity: an ambiguous word is always a trigger, but
//    whether it takes its first or second type is decided by a shared cue
//    word planted in the sentence cue_distance positions later. Nothing in
//    the ambiguous sentence itself predicts the type.
struct SynthConfig {
  int vocab_size = 300;
  int event_types = 6;
  int docs_train = 200;
  int docs_dev = 40;
  int docs_test = 40;
  int sentences_per_doc = 4;
  int tokens_per_sentence = 8;
  int trigger_words = 12;
  double p_trigger = 0.7;
  double p_pair = 0.35;
  int ambiguous_words = 0;
  double p_ambiguous = 0.0;
  int cue_distance = 1;
  int entity_types = 4;
  double p_entity = 0.15;

  void validate() const;  // throws ConfigError on an infeasible setup
};

// Word inventory derived deterministically from the config alone, so tests
// can recover which surface forms are triggers, cues or fillers.
struct SynthInventory {
  struct Trigger {
    std::string word;
    std::string extra;  // continuation token for two-token triggers, else empty
    std::string type;
    int partner;  // index of the co-occurrence partner
  };
  struct Ambiguous {
    std::string word;
    std::string type_a, type_b;  // picked by cue_a / cue_b
  };

  std::vector<std::string> event_types;
  std::vector<std::string> entity_labels;
  std::vector<Trigger> triggers;
  std::vector<Ambiguous> ambiguous;
  std::string cue_a, cue_b;
  std::vector<std::string> fillers;

  bool is_ambiguous_word(const std::string& w) const;
};

SynthInventory make_inventory(const SynthConfig& cfg);

struct SynthCorpus {
  std::vector<RawDocument> train, dev, test;
};

// Same seed, same corpus, byte for byte.
SynthCorpus generate_synthetic(const SynthConfig& cfg, std::uint64_t seed);

// Writes train.jsonl / dev.jsonl / test.jsonl under out_dir.
void write_synthetic(const SynthCorpus& corpus, const std::string& out_dir);

}  // namespace mlbinet::data
