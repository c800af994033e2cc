#ifndef CI_DFA_HPP
#define CI_DFA_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "ci/rational.hpp"
#include "ci/rng.hpp"
#include "ci/word.hpp"

namespace ci {

/// Complete DFA: delta is total (a dead sink is added on load when
/// transitions are missing), so complementation is an accepting-set flip.
struct Dfa {
  Alphabet alphabet;
  std::uint32_t state_count = 0;
  std::uint32_t initial = 0;
  std::vector<bool> accepting;                  // size state_count
  std::vector<std::uint32_t> delta;             // state * |alphabet| + symbol

  std::uint32_t step(std::uint32_t state, std::uint32_t symbol) const {
    return delta[static_cast<std::size_t>(state) * alphabet.size() + symbol];
  }

  /// All-words DFA over the given alphabet.
  static Dfa universal(Alphabet alphabet);
  /// Accepts all words with the given prefix.
  static Dfa prefix(Alphabet alphabet, const Word& prefix);
  /// Accepts all words of length in [m, n].
  static Dfa length_window(Alphabet alphabet, std::uint32_t m, std::uint32_t n);
};

struct Nfa {
  Alphabet alphabet;
  std::uint32_t state_count = 0;
  std::set<std::uint32_t> initials;
  std::vector<bool> accepting;
  // delta[state * |alphabet| + symbol] -> successor set, sorted
  std::vector<std::vector<std::uint32_t>> delta;
};

enum class ProductMode { And, Diff };

bool run(const Dfa& d, const Word& w);

/// Flips the accepting set (valid because automata are kept complete).
Dfa complement(const Dfa& d);

/// Reachable part of the product. And: L(a) n L(b); Diff: L(a) \ L(b).
Dfa product(const Dfa& a, const Dfa& b, ProductMode mode);

/// { w in L(a) : m <= |w| <= n }, via product with a counter chain.
Dfa length_restrict(const Dfa& a, std::uint32_t m, std::uint32_t n);

/// DAG view of a pruned automaton: states that are both reachable and
/// co-reachable, plus one sink vertex reached by an end-of-word edge
/// from every accepting state.
struct PrunedDag {
  static constexpr std::uint32_t kEndEdge = UINT32_MAX;

  Alphabet alphabet;
  std::uint32_t vertex_count = 0;  // last vertex is the sink
  std::uint32_t root = 0;
  // edges[v]: (symbol or kEndEdge, target), in symbol order
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges;
  std::vector<std::uint32_t> topo_order;  // root-first

  std::uint32_t sink() const { return vertex_count - 1; }
};

/// Empty when a cycle survives pruning (infinite language). A DFA whose
/// pruned part is empty (empty language) yields a DAG with just the sink.
std::optional<PrunedDag> prune(const Dfa& d);

/// Per-vertex count of paths to the sink; p_sink = 1.
struct PathCountTable {
  std::vector<BigInt> paths;  // indexed by DAG vertex
  BigInt total;               // p_root, = |L|
};

PathCountTable count_paths(const PrunedDag& dag);

/// |L(d)|, or nullopt for INFINITE.
std::optional<BigInt> count_language(const Dfa& d);

/// Uniform sampler over a finite nonempty L(d): random walk on the
/// pruned DAG where edge (u,v) has weight p_v / p_u. One uniform draw
/// in [0, p_u) selects the child by cumulative ranges; no rejection.
class WalkSampler {
 public:
  /// Throws EmptyLanguage / InfiniteLanguage.
  explicit WalkSampler(const Dfa& d);

  Word draw(Rng& rng) const;

  const BigInt& language_size() const { return counts_.total; }
  const PrunedDag& dag() const { return dag_; }
  const PathCountTable& counts() const { return counts_; }

  /// Exact probability of drawing w: product of edge weights along its
  /// unique accepting path. Zero when w is not accepted.
  Rational word_probability(const Word& w) const;

 private:
  PrunedDag dag_;
  PathCountTable counts_;
};

/// Subset construction; no epsilon-moves. Throws StateBlowup past the cap.
Dfa determinize(const Nfa& n, std::size_t subset_cap = 1u << 20);

}  // namespace ci

#endif
