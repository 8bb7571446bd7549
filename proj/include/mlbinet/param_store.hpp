#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mlbinet/rng.hpp"
#include "mlbinet/value.hpp"

namespace mlbinet::ad {

// Named parameter tensors with deterministic (name-sorted) iteration.
// `weight_decay` marks the matrices the L2 penalty applies to; biases and
// embedding tables leave it off.
class ParamStore {
 public:
  struct Entry {
    Value value;
    bool trainable = true;
    bool weight_decay = false;
  };

  Value create(const std::string& name, std::size_t rows, std::size_t cols,
               bool trainable = true, bool weight_decay = false);
  Value create_uniform(const std::string& name, std::size_t rows, std::size_t cols,
                       Rng& rng, double lo, double hi, bool weight_decay = true);

  bool has(const std::string& name) const { return entries_.count(name) != 0; }
  Value get(const std::string& name) const;
  const Entry& entry(const std::string& name) const;

  const std::map<std::string, Entry>& entries() const { return entries_; }
  std::map<std::string, Entry>& entries() { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::vector<std::string> names() const;

  void zero_grads();
  double grad_norm() const;
  // Rescales all trainable grads so the global norm is at most max_norm.
  void clip_grads(double max_norm);

 private:
  std::map<std::string, Entry> entries_;
};

// Checkpoint container: "MLBN" magic, u32 format version, then repeated
// records of {u32 name length, name bytes, u32 rank, u64 dims[rank],
// row-major little-endian f64 payload}. Round-trips bit-exactly.
namespace ckpt {

constexpr std::uint32_t kVersion = 1;

struct Record {
  std::string name;
  std::vector<std::uint64_t> dims;
  std::vector<double> data;
};

void write_file(const std::string& path, const std::vector<Record>& records);
std::vector<Record> read_file(const std::string& path);

// Helpers for string payloads (vocabularies in model checkpoints): each
// byte of the UTF-8 text is stored as one f64.
std::vector<double> encode_text(const std::string& text);
std::string decode_text(const std::vector<double>& data);

}  // namespace ckpt

// One record per parameter, in name order.
std::vector<ckpt::Record> to_records(const ParamStore& store);
// Assigns payloads into existing parameters by name; every parameter must
// be present with matching shape. Records whose names are absent from the
// store are ignored (metadata records).
void load_records(ParamStore& store, const std::vector<ckpt::Record>& records);

}  // namespace mlbinet::ad
