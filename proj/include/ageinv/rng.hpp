#ifndef AGEINV_RNG_HPP
#define AGEINV_RNG_HPP

#include <cstdint>
#include <random>

namespace ageinv {

/// Seeded random source with hand-rolled distributions so that output
/// streams are identical across standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
  std::mt19937_64 engine_;
};

}  // namespace ageinv

#endif
