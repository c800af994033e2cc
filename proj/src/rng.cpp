#include "ci/rng.hpp"

namespace ci {

namespace {

// splitmix64 finalizer, for mixing (seed, index) into a derived seed.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::derived(std::uint64_t seed, std::uint64_t index) {
  return Rng(mix(seed ^ mix(index)));
}

BigInt Rng::below(const BigInt& n) {
  if (n <= 0) throw Error(ErrorCode::Internal, "Rng::below on empty range");
  if (n <= BigInt(UINT64_MAX))
    return BigInt(below_u64(static_cast<std::uint64_t>(n)));
  const unsigned bits = msb(n) + 1;  // minimal width covering [0, n)
  const unsigned words = (bits + 63) / 64;
  const unsigned top_bits = bits - 64 * (words - 1);
  for (;;) {
    BigInt r = 0;
    for (unsigned i = 0; i < words; ++i) {
      std::uint64_t chunk = gen_();
      if (i == 0 && top_bits < 64) chunk >>= (64 - top_bits);
      r <<= 64;
      r |= BigInt(chunk);
    }
    if (r < n) return r;
  }
}

std::uint64_t Rng::below_u64(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::Internal, "Rng::below_u64 on empty range");
  if ((n & (n - 1)) == 0) return gen_() & (n - 1);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t r = gen_();
    if (r < limit) return r % n;
  }
}

bool bernoulli(const Rational& bias, Rng& rng) {
  if (bias < 0 || bias > 1)
    throw Error(ErrorCode::MalformedInput, "bernoulli bias outside [0,1]");
  if (bias == 0) return false;
  if (bias == 1) return true;
  return rng.below(den(bias)) < num(bias);
}

}  // namespace ci
