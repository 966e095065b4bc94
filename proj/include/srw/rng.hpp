#pragma once

#include <cstdint>

namespace srw {

// Seed expander (splitmix64). Only used to turn a (seed, stream) pair into a
// full 256-bit generator state; never used as the sampling generator itself.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : x_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (x_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t x_;
};

// xoshiro256++ with explicit stream derivation. Stream k of a given seed is
// seeded from splitmix64(seed ^ c*(k+1)) with c odd, so distinct streams of
// one seed never collide in their seeding value. One generator per Monte
// Carlo walker makes ensemble results independent of thread scheduling.
class Xoshiro256pp {
 public:
  Xoshiro256pp() : Xoshiro256pp(1, 0) {}

  Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 sm(seed ^ (0x632be59bd9b4e019ull * (stream + 1)));
    for (auto& word : s_) word = sm.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is absorbing
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace srw
