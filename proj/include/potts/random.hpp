#pragma once

// Counter-derived random streams.
//
// Every stochastic choice in a run draws from a stream whose key is a pure
// function of (master seed, domain, a, b). Streams never share state, so the
// values an agent sees at a given tick do not depend on which thread visited
// it or in what order. Bit generation is SplitMix64; the bounded and unit
// interval conversions below are fixed so output is identical on every
// platform (std distributions are implementation-defined and are not used).

#include <cstdint>
#include <limits>

namespace potts {

enum class StreamDomain : std::uint64_t {
  kRewire = 1,
  kUtilities = 2,
  kInnovators = 3,
  kDecision = 4,
};

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Hashes a stream key into a 64-bit SplitMix64 starting state.
constexpr std::uint64_t derive_stream_key(std::uint64_t seed, StreamDomain domain,
                                          std::uint64_t a = 0, std::uint64_t b = 0) noexcept {
  constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t h = splitmix64_mix(seed + kGolden);
  h = splitmix64_mix(h ^ (static_cast<std::uint64_t>(domain) + kGolden));
  h = splitmix64_mix(h ^ (a + 2 * kGolden));
  h = splitmix64_mix(h ^ (b + 3 * kGolden));
  return h;
}

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  constexpr explicit RandomStream(std::uint64_t key) noexcept : state_(key) {}
  constexpr RandomStream(std::uint64_t seed, StreamDomain domain, std::uint64_t a = 0,
                         std::uint64_t b = 0) noexcept
      : state_(derive_stream_key(seed, domain, a, b)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection; bound > 0.
  constexpr std::uint64_t bounded(std::uint64_t bound) noexcept {
    auto product = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace potts
