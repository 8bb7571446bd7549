#include "mlbinet/param_store.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "mlbinet/errors.hpp"

namespace mlbinet::ad {

Value ParamStore::create(const std::string& name, std::size_t rows, std::size_t cols,
                         bool trainable, bool weight_decay) {
  if (entries_.count(name)) throw Error("parameter already registered: " + name);
  Value v = Value::leaf(rows, cols, std::vector<double>(rows * cols, 0.0));
  if (!trainable) {
    v.node()->requires_grad = false;
    v.node()->grad.clear();
  }
  entries_[name] = Entry{v, trainable, weight_decay};
  return v;
}

Value ParamStore::create_uniform(const std::string& name, std::size_t rows, std::size_t cols,
                                 Rng& rng, double lo, double hi, bool weight_decay) {
  Value v = create(name, rows, cols, true, weight_decay);
  for (auto& x : v.data()) x = rng.uniform(lo, hi);
  return v;
}

Value ParamStore::get(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error("unknown parameter: " + name);
  return it->second.value;
}

const ParamStore::Entry& ParamStore::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error("unknown parameter: " + name);
  return it->second;
}

std::vector<std::string> ParamStore::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

void ParamStore::zero_grads() {
  for (auto& [_, e] : entries_)
    if (e.trainable) e.value.zero_grad();
}

double ParamStore::grad_norm() const {
  double total = 0.0;
  for (const auto& [_, e] : entries_) {
    if (!e.trainable) continue;
    for (double g : e.value.grad()) total += g * g;
  }
  return std::sqrt(total);
}

void ParamStore::clip_grads(double max_norm) {
  double norm = grad_norm();
  if (norm <= max_norm || norm == 0.0) return;
  double s = max_norm / norm;
  for (auto& [_, e] : entries_) {
    if (!e.trainable) continue;
    for (double& g : e.value.grad()) g *= s;
  }
}

namespace ckpt {

namespace {

constexpr char kMagic[4] = {'M', 'L', 'B', 'N'};

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double d) { put_u64(os, std::bit_cast<std::uint64_t>(d)); }

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw DataError("checkpoint: truncated u32");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw DataError("checkpoint: truncated u64");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

void write_file(const std::string& path, const std::vector<Record>& records) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open checkpoint for writing: " + path);
  os.write(kMagic, 4);
  put_u32(os, kVersion);
  for (const auto& rec : records) {
    put_u32(os, static_cast<std::uint32_t>(rec.name.size()));
    os.write(rec.name.data(), static_cast<std::streamsize>(rec.name.size()));
    put_u32(os, static_cast<std::uint32_t>(rec.dims.size()));
    std::uint64_t count = 1;
    for (std::uint64_t d : rec.dims) {
      put_u64(os, d);
      count *= d;
    }
    if (count != rec.data.size())
      throw DataError("checkpoint record " + rec.name + ": dims do not match payload");
    for (double d : rec.data) put_f64(os, d);
  }
  if (!os) throw DataError("checkpoint write failed: " + path);
}

std::vector<Record> read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint: " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("checkpoint: bad magic bytes in " + path);
  std::uint32_t version = get_u32(is);
  if (version != kVersion)
    throw DataError("checkpoint: unsupported format version " + std::to_string(version));
  std::vector<Record> records;
  while (is.peek() != std::char_traits<char>::eof()) {
    Record rec;
    std::uint32_t name_len = get_u32(is);
    rec.name.resize(name_len);
    if (!is.read(rec.name.data(), name_len)) throw DataError("checkpoint: truncated name");
    std::uint32_t rank = get_u32(is);
    std::uint64_t count = 1;
    rec.dims.resize(rank);
    for (std::uint32_t i = 0; i < rank; ++i) {
      rec.dims[i] = get_u64(is);
      count *= rec.dims[i];
    }
    rec.data.resize(count);
    for (std::uint64_t i = 0; i < count; ++i)
      rec.data[i] = std::bit_cast<double>(get_u64(is));
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<double> encode_text(const std::string& text) {
  std::vector<double> out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i)
    out[i] = static_cast<double>(static_cast<unsigned char>(text[i]));
  return out;
}

std::string decode_text(const std::vector<double>& data) {
  std::string out(data.size(), '\0');
  for (std::size_t i = 0; i < data.size(); ++i)
    out[i] = static_cast<char>(static_cast<unsigned char>(data[i]));
  return out;
}

}  // namespace ckpt

std::vector<ckpt::Record> to_records(const ParamStore& store) {
  std::vector<ckpt::Record> out;
  out.reserve(store.size());
  for (const auto& [name, e] : store.entries()) {
    ckpt::Record rec;
    rec.name = name;
    rec.dims = {e.value.rows(), e.value.cols()};
    rec.data = e.value.data();
    out.push_back(std::move(rec));
  }
  return out;
}

void load_records(ParamStore& store, const std::vector<ckpt::Record>& records) {
  std::size_t assigned = 0;
  for (const auto& rec : records) {
    if (!store.has(rec.name)) continue;
    Value v = store.get(rec.name);
    if (rec.dims.size() != 2 || rec.dims[0] != v.rows() || rec.dims[1] != v.cols())
      throw DataError("checkpoint record " + rec.name + ": shape does not match model");
    v.data() = rec.data;
    ++assigned;
  }
  if (assigned != store.size())
    throw DataError("checkpoint is missing " + std::to_string(store.size() - assigned) +
                    " parameter record(s)");
}

}  // namespace mlbinet::ad
