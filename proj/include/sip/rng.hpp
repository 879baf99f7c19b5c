#pragma once

// Seedable 64-bit generator with platform-independent draws and stream splitting.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace sip {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// mt19937_64 underneath; the standard distributions are implementation
/// defined, so every draw here is derived from raw 64-bit words.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  /// Independent stream number k of this seed.
  Rng split(std::uint64_t k) const { return Rng(splitmix64(seed_ ^ splitmix64(k + 0x632be59bd9b4e019ull))); }

  /// Uniform in [lo, hi] by rejection.
  long uniform(long lo, long hi) {
    if (lo > hi) throw std::invalid_argument("Rng::uniform: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == ~0ull) return static_cast<long>(next());
    const std::uint64_t n = span + 1;
    const std::uint64_t limit = ~0ull - (~0ull % n + 1) % n;
    std::uint64_t x;
    do x = next();
    while (x > limit);
    return static_cast<long>(static_cast<std::uint64_t>(lo) + x % n);
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform(0, static_cast<long>(n) - 1)); }

  /// True with probability num/den.
  bool chance(long num, long den) { return uniform(0, den - 1) < num; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace sip
