#pragma once

#include <cstdint>
#include <random>

namespace bdsiw {

// Deterministic uniform random stream.
//
// The engine is std::mt19937_64, whose output sequence is pinned by the
// standard, and the double mapping is done here rather than through
// std::uniform_real_distribution (whose algorithm is implementation
// defined). Streams are therefore reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  // Independent stream for e.g. replication `index` of the cell keyed by
  // `stream`. Derivation is a fixed avalanche mix, so substreams of the
  // same master seed do not overlap in practice.
  static Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return Rng(mix(mix(mix(seed) ^ stream) ^ index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0,1); never returns 0 or 1 exactly.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t v) {
    v += 0x9E3779B97F4A7C15ULL;
    v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ULL;
    v = (v ^ (v >> 27)) * 0x94D049BB133111EBULL;
    return v ^ (v >> 31);
  }

  std::mt19937_64 engine_;
};

// Scalar seed derived from a (seed, a, b) triple, for seeding nested
// components (e.g. the optimizer inside one simulation replication).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  Rng r = Rng::substream(seed, a, b);
  return r.next_u64();
}

}  // namespace bdsiw
