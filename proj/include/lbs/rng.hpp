#pragma once

// Deterministic random stream.  Substreams are derived from (master seed,
// index) with a SplitMix64 mix, so parallel tasks reproduce bit-identical
// results regardless of scheduling.  Normal variates use the inverse-CDF
// transform to keep the draw sequence fixed across standard libraries.

#include <cstdint>
#include <random>

namespace lbs {

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(mix(seed)) {}

  static RngStream derive(std::uint64_t master, std::uint64_t index) {
    return RngStream(mix(master) ^ mix(0x9e3779b97f4a7c15ULL + index));
  }

  /// Uniform on (0,1), never returning the endpoints.
  double uniform() {
    const std::uint64_t bits = engine_() >> 11;  // 53 random bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double normal();

  double exponential();

  std::uint64_t next_u64() { return engine_(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace lbs
