#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace randfnn {

/// SplitMix64 finalizer. Used for seed mixing only, never as the main stream.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a master seed and a list of integer salts
/// (grid-cell coordinates, fold index, trial index, ...). The result depends
/// only on the values passed, so independent work units get independent
/// streams regardless of execution order.
template <class... Salts>
constexpr std::uint64_t derive_seed(std::uint64_t master, Salts... salts) {
  std::uint64_t s = splitmix64(master);
  ((s = splitmix64(s ^ static_cast<std::uint64_t>(salts))), ...);
  return s;
}

/// Deterministic uniform source. Doubles come from the top 53 bits of the
/// engine output so streams do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform draw on [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Uniform draw on [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  /// Unbiased uniform draw from {0, ..., n-1}.
  std::size_t index(std::size_t n) {
    const std::uint64_t span = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = span - span % n;
    std::uint64_t x = eng_();
    while (x >= limit) x = eng_();
    return static_cast<std::size_t>(x % n);
  }

  /// Fair coin: 0 or 1.
  int coin() { return static_cast<int>(eng_() & 1u); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace randfnn
