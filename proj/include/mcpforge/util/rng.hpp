// Deterministic random streams for corpus generation.
//
// std::uniform_int_distribution is not pinned across standard-library
// implementations, so every byte the generator emits flows through this
// SplitMix64 instead: same seed, same corpus, on any platform.
#pragma once

#include <cstdint>

namespace mcpforge::util {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish value in [0, n).  Modulo bias is irrelevant at the scales
  // used here (n is always tiny against 2^64) and keeps the mapping
  // trivially reproducible.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

 private:
  std::uint64_t state_;
};

// Derive an independent stream seed from a base seed and a stream tag.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) {
  SplitMix64 s(base ^ (0x517cc1b727220a95ULL + tag * 0x2545f4914f6cdd1dULL));
  return s.next();
}

}  // namespace mcpforge::util
