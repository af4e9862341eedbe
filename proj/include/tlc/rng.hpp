// Deterministic random number generation for the whole toolkit.
//
// Every random decision (splits, batch sampling, projections, fixtures)
// flows through SplitMix64 so that runs reproduce bit-for-bit across
// platforms and across reimplementations. The exact algorithms, including
// the derived-stream scheme, are written down in docs/determinism.md.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace tlc {

// SplitMix64 finalizer. Also used standalone for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derives an independent seed for a named sub-stream of `base`.
// combine(base, s) != combine(base, t) for s != t in practice.
inline std::uint64_t combine_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base + 0x9E3779B97F4A7C15ull * (stream + 1));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform integer in [0, n). Modulo, not rejection: n is tiny compared
  // with 2^64 everywhere this is used, and the rule must stay trivial to
  // reproduce in other languages.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller, cosine branch only. Consumes exactly
  // two raw draws per value. u1 lies in (0, 1] so the log is finite.
  double next_gaussian() {
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Fisher-Yates, descending index.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace tlc
