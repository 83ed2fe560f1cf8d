#pragma once

#include <cstdint>

namespace scengen {

/// Counter-based uniform source keyed by (master_seed, stream_id).
///
/// Draw k of a stream is a pure function of (master_seed, stream_id, k), so
/// any partition of draw indices across threads reproduces the same values.
/// The generator is SplitMix64 evaluated at an arbitrary counter position.
class SeededRng {
 public:
  constexpr SeededRng(std::uint64_t master_seed, std::uint64_t stream_id = 0)
      : master_seed_(master_seed), stream_id_(stream_id), key_(mix(master_seed ^ mix(stream_id + kGamma))) {}

  constexpr std::uint64_t master_seed() const { return master_seed_; }
  constexpr std::uint64_t stream_id() const { return stream_id_; }

  constexpr std::uint64_t bits(std::uint64_t counter) const { return mix(key_ + (counter + 1) * kGamma); }

  /// Uniform on the open interval (0, 1): odd multiples of 2^-54.
  constexpr double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  constexpr SeededRng substream(std::uint64_t id) const { return SeededRng(master_seed_, id); }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
};

}  // namespace scengen
