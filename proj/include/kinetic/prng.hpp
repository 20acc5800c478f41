#pragma once

#include <cstdint>

namespace kinetic {

/// SplitMix64: tiny, fast, identical on every platform. All randomized test
/// batteries and sample points go through this so reports are reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n) without std::uniform_int_distribution (which is not
  /// portable across standard libraries).
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }

  /// Uniform integer in [lo, hi] inclusive.
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

 private:
  uint64_t state_;
};

}  // namespace kinetic
