/*
 * Deterministic counter-based randomness (SplitMix64).
 *
 * Draw i of a stream seeded with s is mix64(s + (i+1) * GOLDEN), where
 * mix64 is the SplitMix64 finaliser (Steele, Lea & Flood 2014; the same
 * mixer used to seed xoshiro generators).  Because each draw depends only
 * on (seed, index), transcripts are reproducible across runs, platforms
 * and sampling orders -- there is no hidden generator state.
 *
 * uniform01 maps the top 53 bits of a draw onto [0, 1).
 */
#pragma once

#include <cstdint>

namespace hsp {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// The i-th 64-bit draw of the stream with the given seed (counter-based).
inline std::uint64_t rng_draw(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + index * 0x9E3779B97F4A7C15ULL);
}

inline double uniform01(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(rng_draw(seed, index) >> 11) * 0x1.0p-53;
}

}  // namespace hsp
