#pragma once

// Fixed, portable pseudo-random primitives so seeded runs reproduce across
// platforms and implementations. SplitMix64 state update and finalizer as
// published by Steele, Lea and Flood; shuffling is plain Fisher-Yates driven
// by next() % (i + 1).

#include <cstdint>
#include <vector>

namespace fraisse {

struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform value in [0, bound), bound > 0; uses plain modulo on purpose:
  // reproducibility matters more than bias at these sizes
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

template <typename T>
void fisher_yates(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace fraisse
