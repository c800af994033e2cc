#ifndef CI_TESTS_UTIL_HPP
#define CI_TESTS_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ci/dfa.hpp"
#include "ci/word.hpp"

namespace ci::testutil {

inline Alphabet binary_alphabet() { return Alphabet{{"0", "1"}}; }

inline Alphabet alphabet_of_size(std::size_t k) {
  Alphabet a;
  for (std::size_t i = 0; i < k; ++i) a.tokens.push_back(std::to_string(i));
  return a;
}

/// Every word over an alphabet of the given size with length in [m, n],
/// in length-then-lexicographic order.
inline std::vector<Word> all_words(std::size_t alphabet_size, std::uint32_t m,
                                   std::uint32_t n) {
  std::vector<Word> out;
  std::vector<Word> layer{Word{}};
  for (std::uint32_t len = 0; len <= n; ++len) {
    if (len >= m)
      for (const Word& w : layer) out.push_back(w);
    if (len == n) break;
    std::vector<Word> next;
    for (const Word& w : layer)
      for (std::uint32_t a = 0; a < alphabet_size; ++a) {
        Word e = w;
        e.push_back(a);
        next.push_back(std::move(e));
      }
    layer = std::move(next);
  }
  return out;
}

inline std::vector<Word> language_of(const Dfa& d, std::uint32_t m,
                                     std::uint32_t n) {
  std::vector<Word> out;
  for (const Word& w : all_words(d.alphabet.size(), m, n))
    if (run(d, w)) out.push_back(w);
  return out;
}

/// Random complete DFA over {0,1} with up to max_states states.
inline Dfa random_dfa(std::mt19937& gen, std::uint32_t max_states) {
  std::uniform_int_distribution<std::uint32_t> nstates(1, max_states);
  Dfa d;
  d.alphabet = binary_alphabet();
  d.state_count = nstates(gen);
  std::uniform_int_distribution<std::uint32_t> state(0, d.state_count - 1);
  std::bernoulli_distribution acc(0.4);
  d.initial = state(gen);
  for (std::uint32_t q = 0; q < d.state_count; ++q)
    d.accepting.push_back(acc(gen));
  for (std::uint32_t q = 0; q < d.state_count; ++q)
    for (std::size_t s = 0; s < 2; ++s) d.delta.push_back(state(gen));
  return d;
}

/// True when the observed count is within 4 sigma of a Binomial(n, p).
inline bool within_4_sigma(std::uint64_t observed, std::uint64_t n, double p) {
  double mean = static_cast<double>(n) * p;
  double sigma = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
  return std::abs(static_cast<double>(observed) - mean) <= 4.0 * sigma + 1e-9;
}

/// Key for tallying draws.
inline std::string key_of(const Word& w) {
  std::string k;
  for (std::uint32_t s : w) {
    k += std::to_string(s);
    k += ',';
  }
  return k;
}

}  // namespace ci::testutil

#endif
