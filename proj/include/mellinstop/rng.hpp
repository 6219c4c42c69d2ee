#pragma once

#include <cstdint>
#include <initializer_list>

#include "mellinstop/common.hpp"

namespace mellinstop {

// Counter-based pseudo-random generation.  Draw i of a stream keyed by
// `seed` is mix64(seed + (i+1)*GOLDEN) -- the SplitMix64 output function --
// so every draw is a pure function of (seed, i) and streams can be split
// freely across threads without shared state.
//
// Seed splitting (documented contract, used by the experiment harness):
//   derive_seed(base, {id0, id1, ...}) folds each id into the key with
//   h = mix64(h ^ (id + 0x9E3779B97F4A7C15 + (h << 6) + (h >> 2))).
// Replicate k of a size-n run of experiment e uses
//   derive_seed(base_seed, {e, n, k}).

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = base;
  for (std::uint64_t id : ids) h = mix64(h ^ (id + kGolden + (h << 6) + (h >> 2)));
  return h;
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key), counter_(0) {}

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

  /// Uniform draw strictly inside (0,1); 53 mantissa bits.
  double next_unit() {
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (two uniforms per draw).
  double next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  std::uint64_t draws_consumed() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace mellinstop
