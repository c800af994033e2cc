#include "ci/word.hpp"

#include <sstream>

namespace ci {

std::uint32_t Alphabet::index_of(const std::string& token) const {
  int i = find(token);
  if (i < 0) throw Error(ErrorCode::UnknownSymbol, "'" + token + "'");
  return static_cast<std::uint32_t>(i);
}

int Alphabet::find(const std::string& token) const {
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (tokens[i] == token) return static_cast<int>(i);
  return -1;
}

std::string Alphabet::render(const Word& w) const {
  if (w.empty()) return "<eps>";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += tokens.at(w[i]);
  }
  return out;
}

Word Alphabet::parse_word(const std::string& line) const {
  std::istringstream ss(line);
  Word w;
  std::string tok;
  while (ss >> tok) {
    if (tok == "<eps>") continue;
    w.push_back(index_of(tok));
  }
  return w;
}

}  // namespace ci
