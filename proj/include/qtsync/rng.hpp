#pragma once

#include <cstdint>

#include "qtsync/energy.hpp"

namespace qtsync {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: the k-th draw of stream s under seed is a pure
// function of (seed, s, k), so results never depend on scheduling.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Angles uniform on [0, 2 pi).
inline PhaseState random_state(std::size_t n, StreamRng& rng) {
  std::vector<double> t(n);
  for (auto& x : t) x = rng.uniform(0.0, 2.0 * kPi);
  return PhaseState(std::move(t));
}

}  // namespace qtsync
