#pragma once

#include <cstdint>
#include <random>

namespace plantmarket {

/// Random stream used by every solver.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard.
/// The standard distributions are not (their algorithms are
/// implementation-defined), so the mappings to [0,1) and to index ranges are
/// done here to keep runs bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    // rejection sampling removes modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace plantmarket
