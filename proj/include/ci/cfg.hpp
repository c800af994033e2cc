#ifndef CI_CFG_HPP
#define CI_CFG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ci/dfa.hpp"
#include "ci/rational.hpp"
#include "ci/rng.hpp"
#include "ci/word.hpp"

namespace ci {

struct Sym {
  bool is_terminal = false;
  std::uint32_t id = 0;

  bool operator==(const Sym&) const = default;
  auto operator<=>(const Sym&) const = default;
};

struct Production {
  std::uint32_t lhs = 0;
  std::vector<Sym> rhs;  // empty means epsilon

  bool operator==(const Production&) const = default;
  auto operator<=>(const Production&) const = default;
};

struct Cfg {
  Alphabet terminals;
  std::vector<std::string> nonterminals;
  std::uint32_t start = 0;
  std::vector<Production> productions;
  /// Unverifiable promise; counting has a runtime tripwire for it.
  bool unambiguous_promise = true;
};

/// Grammar where every RHS has length 1 (a terminal) or 2 (terminals or
/// nonterminals in either slot), with epsilon and unit productions
/// eliminated. L(normalized) = L(original) \ {eps}.
struct NormalizedCfg {
  Alphabet terminals;
  std::vector<std::string> nonterminals;
  std::uint32_t start = 0;
  std::vector<Production> productions;
  bool epsilon_in_language = false;
};

/// The Bar-Hillel output is a normalized grammar over (state, A, state)
/// triples; it stays unambiguous when the input grammar is.
using TripleGrammar = NormalizedCfg;

/// Epsilon-elimination, unit elimination, then left-factored
/// binarization; deliberately not full CNF (terminals may remain in
/// binary right-hand sides).
NormalizedCfg normalize(const Cfg& g);

struct ParseResult {
  bool member = false;
  int derivations = 0;  // number of distinct derivation trees, capped at 2
};

/// CYK over the normalized grammar; the derivation count doubles as the
/// ambiguity-detection oracle.
ParseResult parse_membership(const NormalizedCfg& g, const Word& w);
ParseResult parse_membership(const Cfg& g, const Word& w);

/// The D' construction: adds Accept/Reject states; every transition
/// into an accepting state is mirrored by a transition to Accept, which
/// becomes the sole accepting state. L(D') = L(d) \ {eps}, and each
/// accepted word has exactly one accepting path.
Nfa modify_dfa(const Dfa& d);

/// Unambiguity-preserving intersection with a DFA. Only triples
/// reachable from the start and productive survive. The grammar's
/// terminals must all occur in d's alphabet; the result is indexed by
/// d's alphabet.
TripleGrammar bar_hillel(const NormalizedCfg& g, const Dfa& d);
TripleGrammar bar_hillel(const Cfg& g, const Dfa& d);

/// Word counts per nonterminal and length, shared across all lengths up
/// to the bound, plus per-length language counts c_i (c_0 reflects the
/// epsilon flag).
struct CountTable {
  std::uint32_t max_len = 0;
  std::vector<std::vector<BigInt>> by_nonterminal;  // [nt][len], len >= 1
  std::vector<BigInt> by_length;                    // c_0 .. c_max_len

  BigInt total_in_range(std::uint32_t m, std::uint32_t n) const;
};

CountTable count_by_length(const NormalizedCfg& g, std::uint32_t n);

/// Compares counted words against distinct-word enumeration on short
/// lengths; a mismatch means the unambiguity promise was violated.
/// Lengths whose count exceeds word_cap are skipped.
void ambiguity_tripwire(const NormalizedCfg& g, const CountTable& table,
                        std::uint32_t max_len = 8,
                        std::uint64_t word_cap = 4096);

/// Enumerates L(g) restricted to length exactly len (test oracle and
/// tripwire helper); empty when the count exceeds cap.
std::vector<Word> enumerate_words(const NormalizedCfg& g, std::uint32_t len,
                                  std::uint64_t cap);

/// Uniform draw from { w in L(g) : m <= |w| <= n }: picks length j with
/// probability c_j / sum c_k, then descends the grammar choosing
/// productions and split points with exactly proportional weights.
Word sample_range(const NormalizedCfg& g, const CountTable& table,
                  std::uint32_t m, std::uint32_t n, Rng& rng);

/// Exact probability that sample_range produces w (the product of its
/// choice probabilities); 1/sum c_k for every member, by construction.
Rational sample_probability(const NormalizedCfg& g, const CountTable& table,
                            std::uint32_t m, std::uint32_t n, const Word& w);

/// Branch weights of the incremental-prefix complement walk at prefix
/// sigma: |Delta_{sigma a}| per symbol, plus weight 1 for {sigma} when
/// sigma itself lies in Delta = L(i_dfa) \ L(a_gram).
struct PrefixWalkWeights {
  std::vector<BigInt> per_symbol;
  bool self = false;
  BigInt total;  // |Delta_sigma|
};

PrefixWalkWeights prefix_walk_weights(const Dfa& i_dfa,
                                      const NormalizedCfg& a_gram,
                                      std::uint32_t n, const Word& prefix);

/// Uniform draw from Delta = L(i_dfa) \ L(a_gram); Delta must be
/// nonempty. Builds the word symbol by symbol, selecting each extension
/// with probability |Delta_{sigma a}| / |Delta_sigma|.
Word prefix_walk_sample(const Dfa& i_dfa, const NormalizedCfg& a_gram,
                        std::uint32_t n, Rng& rng);

/// Repeated-draw form of the walk: branch weights depend only on the
/// prefix, so they are computed once per distinct prefix and cached.
class PrefixWalkSampler {
 public:
  PrefixWalkSampler(Dfa i_dfa, NormalizedCfg a_gram, std::uint32_t n);

  Word draw(Rng& rng);

  const PrefixWalkWeights& weights(const Word& prefix);

 private:
  Dfa i_dfa_;
  NormalizedCfg a_gram_;
  std::uint32_t n_;
  std::map<Word, PrefixWalkWeights> cache_;
};

}  // namespace ci

#endif
