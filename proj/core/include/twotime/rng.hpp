#pragma once

#include <cstdint>

namespace twotime {

// SplitMix64: tiny, statistically solid, and — key property here —
// counter-friendly: one independent stream per trial index, so trials can
// run on any number of threads and still produce bit-identical outcomes.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 mantissa bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

// Stream for one trial: the master seed advanced along a Weyl sequence by
// the trial index. Distinct trials get decorrelated streams; the mapping
// is pure, so the schedule that executes trials is irrelevant.
inline SplitMix64 trial_stream(std::uint64_t master_seed, std::uint64_t trial_index) {
  return SplitMix64(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15ull);
}

}  // namespace twotime
