#ifndef CI_SYMBOLIC_HPP
#define CI_SYMBOLIC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ci/rational.hpp"
#include "ci/rng.hpp"
#include "ci/sat.hpp"
#include "ci/word.hpp"

namespace ci {

/// CNF formula over projected word variables (n symbols of k bits each)
/// plus existential auxiliaries. L = { w in ({0,1}^k)^n : exists a,
/// phi(w, a) }. Bits are in word order: symbol t occupies
/// projected[t*k .. t*k+k-1], most significant bit first.
struct SymbolicSpec {
  std::uint32_t bits_per_symbol = 0;  // k
  std::uint32_t length = 0;           // n
  Cnf cnf;
  std::vector<int> projected;  // n*k variables in word order

  /// Symbol indices are the binary value of their k bits.
  std::uint32_t alphabet_size() const { return 1u << bits_per_symbol; }
};

/// Transition system over {0,1}^m states and {0,1}^k inputs, given by
/// clause templates. Template variable numbering: init/acc clauses use
/// 1..m for the state bits; delta clauses use 1..m for the source,
/// m+1..m+k for the input, m+k+1..2m+k for the target.
struct SymbolicAutomaton {
  std::uint32_t state_bits = 0;  // m
  std::uint32_t input_bits = 0;  // k
  std::vector<Clause> init;
  std::vector<Clause> acc;
  std::vector<Clause> delta;
};

/// Bounded unrolling: asserts init(x_0), delta(x_t, c_t, x_{t+1}) for
/// t < n and acc(x_n). Projected models are L(a) restricted to Sigma^n.
SymbolicSpec unroll(const SymbolicAutomaton& a, std::uint32_t n);

/// Intersection: shared projected variables identified, auxiliaries
/// renamed apart. Throws ShapeMismatch when k or n differ.
SymbolicSpec conjoin(const SymbolicSpec& h, const SymbolicSpec& s);

/// Exact projected model count by iterated SAT with blocking clauses
/// over the projected variables. Throws CapExceeded past cap.
BigInt projected_count_exact(const SymbolicSpec& spec, SatOracle& oracle,
                             std::uint64_t cap = 1u << 20);

/// Enumerates projected models up to cap+1 entries (helper shared by
/// counting and hashing-based sampling).
std::vector<Word> enumerate_projected(const SymbolicSpec& spec,
                                      SatOracle& oracle, std::uint64_t cap);

bool is_member(const SymbolicSpec& spec, const Word& w, SatOracle& oracle);

/// Hashing-based sampler, uniform up to a factor of 1+tau: random
/// parity constraints over the projected variables shrink the solution
/// set to at most pivot(tau) models, which are enumerated and one
/// picked uniformly; empty cells are retried.
class ApproxSampler {
 public:
  ApproxSampler(SymbolicSpec spec, Rational tau, SatOracle& oracle,
                std::uint64_t retry_cap = 10000);

  Word draw(Rng& rng) const;

  std::uint64_t pivot() const { return pivot_; }

 private:
  SymbolicSpec spec_;
  SatOracle& oracle_;
  std::uint64_t pivot_;
  std::uint64_t retry_cap_;
};

/// Approximate improviser for fixed-length symbolic instances: with
/// probability 1-epsilon samples (1+tau)-uniformly from
/// A = L(H) n L(S), otherwise from I = L(H). Assumes the instance is
/// feasible; yields an (epsilon, epsilon*lambda/(1+tau),
/// rho*(1+epsilon)*(1+tau))-improviser.
class SymbolicImproviser {
 public:
  SymbolicImproviser(const SymbolicSpec& hard, const SymbolicSpec& soft,
                     const Rational& epsilon, const Rational& tau,
                     SatOracle& oracle);

  Word draw(Rng& rng) const;

 private:
  Rational epsilon_;
  ApproxSampler sample_a_;
  ApproxSampler sample_i_;
};

}  // namespace ci

#endif
