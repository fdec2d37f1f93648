#pragma once

#include <cstdint>
#include <string_view>

namespace fxlabel {

// Deterministic across platforms, unlike <random> distributions; every
// reproducibility contract in the toolkit is built on this stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [0, bound)
  std::uint64_t next_below(std::uint64_t bound) {
    return bound == 0 ? 0 : next() % bound;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Independent per-record stream: parallel labeling order cannot change
// any perturbation output.
inline SplitMix64 derive_stream(std::uint64_t seed, std::string_view key,
                                std::uint64_t salt) {
  return SplitMix64(seed ^ (fnv1a64(key) + 0x9e3779b97f4a7c15ull * (salt + 1)));
}

}  // namespace fxlabel
