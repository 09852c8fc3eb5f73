#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace latpp::detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Derives an independent substream seed from a base seed and a tag path.
/// The derivation is a fixed function of (base, tags), so parallel and serial
/// schedules that hand the same tags to a consumer see identical streams.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = splitmix64(base);
  for (std::uint64_t t : tags) s = splitmix64(s ^ splitmix64(t + kGolden));
  return s;
}

/// Uniform double in [0,1) from the raw 64-bit stream. Avoids
/// std::uniform_real_distribution, whose draw sequence is
/// implementation-defined; this keeps outputs bit-identical across toolchains.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(std::mt19937_64& gen, double p) {
  return uniform01(gen) < p;
}

}  // namespace latpp::detail
