#ifndef CI_WORD_HPP
#define CI_WORD_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ci/error.hpp"

namespace ci {

/// A word is a sequence of symbol indices into some Alphabet.
using Word = std::vector<std::uint32_t>;

/// Ordered list of symbol tokens. Symbol indices follow file order so
/// that all iteration (and hence sampling) is seed-reproducible.
struct Alphabet {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }

  bool operator==(const Alphabet& other) const = default;

  /// Index of a token, or throws UnknownSymbol.
  std::uint32_t index_of(const std::string& token) const;

  /// -1 when absent.
  int find(const std::string& token) const;

  std::string render(const Word& w) const;
  Word parse_word(const std::string& line) const;
};

}  // namespace ci

#endif
