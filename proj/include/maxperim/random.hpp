#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace maxperim {

using Engine = std::mt19937_64;

// Stream tags keep unrelated consumers of one user seed apart.
enum class StreamTag : std::uint64_t {
  samples = 0x5A17,
  polytope = 0x9017,
  trial = 0x7121,
  volume = 0x701E,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derives a child seed; used to give each trial / cell its own seed space.
constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  return mix64(mix64(seed ^ static_cast<std::uint64_t>(tag)) + mix64(index));
}

// Independent engine for chunk `index` of stream `tag` under `seed`. The
// result depends only on the triple, never on which thread asks for it.
inline Engine substream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  std::uint64_t const key = derive_seed(seed, tag, index);
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return Engine(seq);
}

}  // namespace maxperim
