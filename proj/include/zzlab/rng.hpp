#pragma once

// Counter-based random streams: draw i of a run with seed s depends only on
// (s, i), never on scheduling. Integer sampling is by exact rejection.

#include <cstdint>

#include "bigint.hpp"
#include "errors.hpp"

namespace zzlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index) : state_(splitmix64(seed) ^ splitmix64(index ^ 0x5851f42d4c957f2dull)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw DomainError("empty sampling range");
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    while (true) {
      std::uint64_t v = next();
      if (v < limit) return v % bound;
    }
  }

  /// Uniform in [0, bound) for an arbitrary positive big integer.
  BigInt below(const BigInt& bound) {
    if (bound <= 0) throw DomainError("empty sampling range");
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
    const unsigned words = (bits + 63) / 64;
    const unsigned top_bits = bits - 64 * (words - 1);
    while (true) {
      BigInt v = 0;
      for (unsigned w = 0; w < words; ++w) {
        std::uint64_t x = next();
        if (w == 0 && top_bits < 64) x &= (std::uint64_t{1} << top_bits) - 1;
        v = (v << 64) | BigInt(x);
      }
      if (v < bound) return v;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace zzlab
