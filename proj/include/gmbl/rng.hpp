#pragma once

#include <cstdint>
#include <random>

namespace gmbl::rng {

// splitmix64 step; good avalanche, used only to derive seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Named sub-streams of the master seed. Every random draw in the library
/// comes from an engine seeded with derive(master, stream), so runs are
/// reproducible from the single seed recorded in the manifest.
enum Stream : std::uint64_t {
  kAnchors = 1,
  kInitCodes = 2,
  kKmeans = 3,
  kSynthetic = 4,
};

/// Deterministically maps (master seed, stream id) to an independent seed.
inline std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return splitmix64(s);
}

inline std::mt19937_64 engine(std::uint64_t master, std::uint64_t stream) {
  return std::mt19937_64(derive(master, stream));
}

}  // namespace gmbl::rng
