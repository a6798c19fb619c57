#pragma once

#include <cstdint>

namespace gaugeset {

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: the same (seed, a, b, c) always gives the same
/// sequence, independent of thread scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0)
      : state_(mix64(mix64(mix64(mix64(seed) ^ a) ^ b) ^ c)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Base-2 van der Corput point i (i >= 1 gives 1/2, 1/4, 3/4, ...).
inline double van_der_corput(std::uint64_t i) {
  double q = 0.0;
  double bk = 0.5;
  while (i > 0) {
    if (i & 1U) q += bk;
    i >>= 1;
    bk *= 0.5;
  }
  return q;
}

}  // namespace gaugeset
