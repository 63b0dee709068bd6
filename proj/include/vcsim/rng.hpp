#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace vcsim {

// All randomness flows from one master seed through named sub-streams
// (vu-gen, task-gen, sim, monte-carlo) so a change in one module's draw
// count never perturbs another module's sequence.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t substream_seed(std::uint64_t master, std::string_view name) {
  return splitmix64(master ^ fnv1a64(name));
}

// per-trial seeds for embarrassingly parallel work; independent of how
// trials are sliced across threads
inline std::uint64_t trial_seed(std::uint64_t stream, std::uint64_t index) {
  return splitmix64(stream + 0x9E3779B97F4A7C15ULL * (index + 1));
}

// Draws are explicit inverse-CDF transforms over mt19937_64 words, not the
// standard <random> distributions, whose sequences differ between standard
// library implementations.

inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;  // [0,1)
}

inline double exponential(std::mt19937_64& g, double mean) {
  return -mean * std::log1p(-uniform01(g));
}

inline std::int64_t uniform_int(std::mt19937_64& g, std::int64_t lo, std::int64_t hi) {
  // modulo bias is ~range/2^64; negligible for the minute-scale ranges here
  return lo + static_cast<std::int64_t>(g() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline double uniform_real(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

}  // namespace vcsim
