#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mlbinet {

// Seedable generator owned by whoever needs randomness; there is no global
// RNG anywhere in the library. Distributions are hand-rolled on top of the
// raw 64-bit stream so identical seeds give identical values on every
// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // inclusive bounds
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::vector<T>& items) {
    // Fisher-Yates with the local stream.
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = next_u64() % i;
      std::swap(items[i - 1], items[j]);
    }
  }

  // Independent stream derived from the original seed.
  Rng fork(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 1))); }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace mlbinet
