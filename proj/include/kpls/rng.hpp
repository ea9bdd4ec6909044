#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace kpls {

// Counter-based normal and uniform draws: every value is a pure function of (seed, stream, index).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(mix(seed ^ 0x243F6A8885A308D3ULL) + stream * 0x9E3779B97F4A7C15ULL)) {}

  // Uniform on (0, 1), 53 bits.
  double uniform(std::uint64_t index) const {
    const std::uint64_t bits = mix(key_ + (index + 1) * 0x9E3779B97F4A7C15ULL);
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  // Box-Muller, cosine branch only, so entry i uses counters 2i and 2i+1.
  double normal(std::uint64_t index) const {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

// Stream tags separating the purposes of draws under one seed.
inline constexpr std::uint64_t kDesignStream = 0xD0000000ULL;
inline constexpr std::uint64_t kAuxStream = 0xA0000000ULL;
inline std::uint64_t noise_stream(std::uint64_t replication) { return 0x100000000ULL + replication; }

}  // namespace kpls
