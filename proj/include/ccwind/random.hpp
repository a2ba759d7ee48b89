#pragma once

#include <cstdint>
#include <random>

namespace ccwind {

using Rng = std::mt19937_64;

/// Derive an independent child seed from (parent, index). splitmix64 finalizer
/// over both words so neighbouring indices give uncorrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(parent) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

}  // namespace ccwind
