#pragma once

#include <complex>
#include <cstdint>

namespace qfock {

using cplx = std::complex<double>;

// Default tolerances of the library.  Algebraic identities are exact up to
// rounding in the partition/permutation sums; kernel validity is sharper.
inline constexpr double kIdentityTol = 1e-10;
inline constexpr double kKernelTol = 1e-12;

// Deterministic RNG: mt19937_64 with an explicit 53-bit mapping so that
// identical seeds give identical doubles on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // xorshift* keeps this header-only and standard-independent
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dull;
  }

  // uniform in [-1, 1)
  double sym() { return uniform() * 2.0 - 1.0; }

  // uniform in [0, 1)
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  int below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

 private:
  std::uint64_t state_;
};

}  // namespace qfock
