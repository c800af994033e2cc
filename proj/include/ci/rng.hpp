#ifndef CI_RNG_HPP
#define CI_RNG_HPP

#include <cstdint>
#include <random>

#include "ci/error.hpp"
#include "ci/rational.hpp"

namespace ci {

/// Seedable deterministic generator of uniform integers in arbitrary
/// ranges. The same seed reproduces the same draw sequence bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Derives an independent stream from (seed, index), used for
  /// reproducible parallel generation.
  static Rng derived(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, n) for n >= 1, by rejection over the minimal number
  /// of random bits.
  BigInt below(const BigInt& n);

  /// Uniform in [0, n) for machine-word n >= 1.
  std::uint64_t below_u64(std::uint64_t n);

 private:
  std::mt19937_64 gen_;
};

/// True with probability exactly bias: draws u uniform in
/// [0, denominator) and returns u < numerator.
bool bernoulli(const Rational& bias, Rng& rng);

}  // namespace ci

#endif
