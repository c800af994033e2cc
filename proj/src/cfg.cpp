#include "ci/cfg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace ci {

namespace {

Sym nt(std::uint32_t id) { return Sym{false, id}; }
Sym term(std::uint32_t id) { return Sym{true, id}; }

void sort_unique(std::vector<Production>& ps) {
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
}

}  // namespace

NormalizedCfg normalize(const Cfg& g) {
  NormalizedCfg out;
  out.terminals = g.terminals;
  out.nonterminals = g.nonterminals;
  out.start = g.start;

  // Nullable set, then epsilon elimination: every production is
  // replaced by all variants with some subset of nullable occurrences
  // dropped, minus the empty variant.
  std::vector<bool> nullable(g.nonterminals.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (nullable[p.lhs]) continue;
      bool all = true;
      for (const Sym& s : p.rhs)
        if (s.is_terminal || !nullable[s.id]) { all = false; break; }
      if (all) {
        nullable[p.lhs] = true;
        changed = true;
      }
    }
  }
  out.epsilon_in_language = !g.nonterminals.empty() && nullable[g.start];

  std::vector<Production> work;
  for (const auto& p : g.productions) {
    std::vector<Sym> partial;
    auto expand = [&](auto&& self, std::size_t pos) -> void {
      if (pos == p.rhs.size()) {
        if (!partial.empty()) work.push_back({p.lhs, partial});
        return;
      }
      const Sym& s = p.rhs[pos];
      partial.push_back(s);
      self(self, pos + 1);
      partial.pop_back();
      if (!s.is_terminal && nullable[s.id]) self(self, pos + 1);
    };
    expand(expand, 0);
  }
  sort_unique(work);

  // Unit elimination via the unit-pair closure.
  const std::size_t n_nts = g.nonterminals.size();
  std::vector<std::set<std::uint32_t>> unit_reach(n_nts);
  for (std::uint32_t a = 0; a < n_nts; ++a) unit_reach[a].insert(a);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : work) {
      if (p.rhs.size() != 1 || p.rhs[0].is_terminal) continue;
      for (std::uint32_t a = 0; a < n_nts; ++a) {
        if (!unit_reach[a].count(p.lhs)) continue;
        if (unit_reach[a].insert(p.rhs[0].id).second) changed = true;
      }
    }
  }
  std::vector<Production> no_units;
  for (std::uint32_t a = 0; a < n_nts; ++a)
    for (std::uint32_t b : unit_reach[a])
      for (const auto& p : work) {
        if (p.lhs != b) continue;
        if (p.rhs.size() == 1 && !p.rhs[0].is_terminal) continue;
        no_units.push_back({a, p.rhs});
      }
  sort_unique(no_units);

  // Left-factored binarization with fresh chain nonterminals.
  for (const auto& p : no_units) {
    if (p.rhs.size() <= 2) {
      out.productions.push_back(p);
      continue;
    }
    std::uint32_t lhs = p.lhs;
    for (std::size_t i = 0; i + 2 < p.rhs.size(); ++i) {
      std::uint32_t fresh = static_cast<std::uint32_t>(out.nonterminals.size());
      out.nonterminals.push_back(g.nonterminals[p.lhs] + "~" +
                                 std::to_string(out.nonterminals.size()));
      out.productions.push_back({lhs, {p.rhs[i], nt(fresh)}});
      lhs = fresh;
    }
    out.productions.push_back(
        {lhs, {p.rhs[p.rhs.size() - 2], p.rhs[p.rhs.size() - 1]}});
  }
  return out;
}

// ---------------------------------------------------------------------
// CYK with derivation counts capped at 2.

namespace {

int cap2(int a) { return a > 2 ? 2 : a; }

// dp[len][i][nt], len in 1..|w|
using CykTable = std::vector<std::vector<std::vector<int>>>;

CykTable cyk(const NormalizedCfg& g, const Word& w) {
  const std::size_t n = w.size();
  const std::size_t nts = g.nonterminals.size();
  CykTable dp(n + 1, std::vector<std::vector<int>>(n, std::vector<int>(nts, 0)));
  auto piece = [&](const Sym& s, std::size_t i, std::size_t len) -> int {
    if (s.is_terminal) return len == 1 && w[i] == s.id ? 1 : 0;
    return dp[len][i][s.id];
  };
  for (std::size_t len = 1; len <= n; ++len)
    for (std::size_t i = 0; i + len <= n; ++i)
      for (const auto& p : g.productions) {
        int c = 0;
        if (p.rhs.size() == 1) {
          c = piece(p.rhs[0], i, len);
        } else {
          for (std::size_t split = 1; split < len; ++split)
            c = cap2(c + piece(p.rhs[0], i, split) *
                             piece(p.rhs[1], i + split, len - split));
        }
        if (c) dp[len][i][p.lhs] = cap2(dp[len][i][p.lhs] + c);
      }
  return dp;
}

}  // namespace

ParseResult parse_membership(const NormalizedCfg& g, const Word& w) {
  for (std::uint32_t s : w)
    if (s >= g.terminals.size())
      throw Error(ErrorCode::UnknownSymbol, "symbol index out of range");
  if (w.empty())
    return {g.epsilon_in_language, g.epsilon_in_language ? 1 : 0};
  if (g.nonterminals.empty()) return {false, 0};
  int c = cyk(g, w)[w.size()][0][g.start];
  return {c > 0, c};
}

ParseResult parse_membership(const Cfg& g, const Word& w) {
  return parse_membership(normalize(g), w);
}

// ---------------------------------------------------------------------
// Bar-Hillel intersection.

Nfa modify_dfa(const Dfa& d) {
  Nfa out;
  out.alphabet = d.alphabet;
  const std::uint32_t accept = d.state_count;
  const std::uint32_t reject = d.state_count + 1;
  out.state_count = d.state_count + 2;
  out.initials = {d.initial};
  out.accepting.assign(out.state_count, false);
  out.accepting[accept] = true;
  const std::size_t sigma = d.alphabet.size();
  out.delta.resize(static_cast<std::size_t>(out.state_count) * sigma);
  for (std::uint32_t x = 0; x < d.state_count; ++x)
    for (std::uint32_t a = 0; a < sigma; ++a) {
      std::uint32_t y = d.step(x, a);
      auto& succ = out.delta[static_cast<std::size_t>(x) * sigma + a];
      succ.push_back(y);
      if (d.accepting[y]) succ.push_back(accept);
      std::sort(succ.begin(), succ.end());
    }
  for (std::uint32_t x = accept; x <= reject; ++x)
    for (std::uint32_t a = 0; a < sigma; ++a)
      out.delta[static_cast<std::size_t>(x) * sigma + a] = {reject};
  return out;
}

namespace {

using Triple = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

struct TripleProduction {
  Triple lhs;
  // Mirrors Production but children are triples or terminals.
  struct Child {
    bool is_terminal;
    std::uint32_t terminal;
    Triple triple;
  };
  std::vector<Child> rhs;
};

}  // namespace

TripleGrammar bar_hillel(const NormalizedCfg& g, const Dfa& d) {
  // Map grammar terminals into the DFA's alphabet.
  std::vector<std::uint32_t> tmap(g.terminals.size());
  for (std::size_t t = 0; t < g.terminals.size(); ++t) {
    int i = d.alphabet.find(g.terminals.tokens[t]);
    if (i < 0)
      throw Error(ErrorCode::AlphabetMismatch,
                  "grammar terminal '" + g.terminals.tokens[t] +
                      "' not in DFA alphabet");
    tmap[t] = static_cast<std::uint32_t>(i);
  }

  // D' transition relation, indexed forward and backward. The Reject
  // state is never a transition source we care about.
  const std::uint32_t accept = d.state_count;
  const std::size_t sigma = d.alphabet.size();
  std::vector<std::vector<std::vector<std::uint32_t>>> fwd(
      d.state_count,
      std::vector<std::vector<std::uint32_t>>(sigma));
  for (std::uint32_t x = 0; x < d.state_count; ++x)
    for (std::uint32_t a = 0; a < sigma; ++a) {
      std::uint32_t y = d.step(x, a);
      fwd[x][a].push_back(y);
      if (d.accepting[y]) fwd[x][a].push_back(accept);
    }

  // Bottom-up closure of productive triples (x, A, z).
  std::set<Triple> productive;
  // by_left[A][x] = { y : (x, A, y) productive }, for extending products.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>>
      by_left;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>>
      by_right;  // [A][y] = { x }
  std::vector<Triple> worklist;
  auto mark = [&](std::uint32_t x, std::uint32_t a_nt, std::uint32_t z) {
    Triple t{x, a_nt, z};
    if (productive.insert(t).second) {
      by_left[{a_nt, x}].push_back(z);
      by_right[{a_nt, z}].push_back(x);
      worklist.push_back(t);
    }
  };

  auto targets = [&](std::uint32_t x, std::uint32_t gterm)
      -> const std::vector<std::uint32_t>& {
    static const std::vector<std::uint32_t> none;
    if (x >= d.state_count) return none;  // Accept has no live successors
    return fwd[x][tmap[gterm]];
  };

  // Base cases from terminal-bearing productions.
  for (const auto& p : g.productions) {
    if (p.rhs.size() == 1) {
      for (std::uint32_t x = 0; x < d.state_count; ++x)
        for (std::uint32_t y : targets(x, p.rhs[0].id)) mark(x, p.lhs, y);
    } else if (p.rhs[0].is_terminal && p.rhs[1].is_terminal) {
      for (std::uint32_t x = 0; x < d.state_count; ++x)
        for (std::uint32_t y : targets(x, p.rhs[0].id))
          for (std::uint32_t z : targets(y, p.rhs[1].id)) mark(x, p.lhs, z);
    }
  }
  // Closure over productions with nonterminal children, indexed by the
  // occurring nonterminal so each pop touches only relevant productions.
  std::vector<std::vector<std::uint32_t>> occurs(g.nonterminals.size());
  for (std::uint32_t pi = 0; pi < g.productions.size(); ++pi) {
    const auto& p = g.productions[pi];
    if (p.rhs.size() != 2) continue;
    for (const Sym& s : p.rhs)
      if (!s.is_terminal) occurs[s.id].push_back(pi);
  }
  for (auto& v : occurs) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  while (!worklist.empty()) {
    auto [x, b_nt, y] = worklist.back();
    worklist.pop_back();
    for (std::uint32_t pi : occurs[b_nt]) {
      const auto& p = g.productions[pi];
      const Sym& l = p.rhs[0];
      const Sym& r = p.rhs[1];
      if (!l.is_terminal && l.id == b_nt) {
        if (r.is_terminal) {
          for (std::uint32_t z : targets(y, r.id)) mark(x, p.lhs, z);
        } else {
          // copy: mark() may extend this same index entry
          std::vector<std::uint32_t> zs = by_left[{r.id, y}];
          for (std::uint32_t z : zs) mark(x, p.lhs, z);
        }
      }
      if (!r.is_terminal && r.id == b_nt) {
        if (l.is_terminal) {
          // w -> l -> x -> ... b_nt ... -> y needs an edge (w, l, x).
          for (std::uint32_t w = 0; w < d.state_count; ++w)
            for (std::uint32_t mid : targets(w, l.id))
              if (mid == x) mark(w, p.lhs, y);
        } else {
          std::vector<std::uint32_t> ws = by_right[{l.id, x}];
          for (std::uint32_t w : ws) mark(w, p.lhs, y);
        }
      }
    }
  }

  // Generate productions over productive triples, then keep the part
  // reachable from the start triple.
  const Triple start_triple{d.initial, g.start, accept};
  std::map<Triple, std::vector<TripleProduction>> by_lhs;
  auto is_productive = [&](const Triple& t) { return productive.count(t) > 0; };
  for (const auto& p : g.productions) {
    const Sym& l = p.rhs[0];
    if (p.rhs.size() == 1) {
      for (std::uint32_t x = 0; x < d.state_count; ++x)
        for (std::uint32_t y : targets(x, l.id))
          by_lhs[{x, p.lhs, y}].push_back(
              {{x, p.lhs, y}, {{true, tmap[l.id], {}}}});
      continue;
    }
    const Sym& r = p.rhs[1];
    for (std::uint32_t x = 0; x < d.state_count; ++x) {
      std::vector<std::pair<std::uint32_t, TripleProduction::Child>> lefts;
      if (l.is_terminal) {
        for (std::uint32_t y : targets(x, l.id))
          lefts.push_back({y, {true, tmap[l.id], {}}});
      } else {
        for (std::uint32_t y : by_left[{l.id, x}])
          lefts.push_back({y, {false, 0, {x, l.id, y}}});
      }
      for (auto& [y, lchild] : lefts) {
        if (r.is_terminal) {
          for (std::uint32_t z : targets(y, r.id))
            by_lhs[{x, p.lhs, z}].push_back(
                {{x, p.lhs, z}, {lchild, {true, tmap[r.id], {}}}});
        } else {
          for (std::uint32_t z : by_left[{r.id, y}])
            if (is_productive({y, r.id, z}))
              by_lhs[{x, p.lhs, z}].push_back(
                  {{x, p.lhs, z}, {lchild, {false, 0, {y, r.id, z}}}});
        }
      }
    }
  }

  std::set<Triple> reachable;
  std::vector<Triple> frontier;
  if (by_lhs.count(start_triple) || is_productive(start_triple)) {
    reachable.insert(start_triple);
    frontier.push_back(start_triple);
  }
  while (!frontier.empty()) {
    Triple t = frontier.back();
    frontier.pop_back();
    auto it = by_lhs.find(t);
    if (it == by_lhs.end()) continue;
    for (const auto& tp : it->second)
      for (const auto& c : tp.rhs)
        if (!c.is_terminal && reachable.insert(c.triple).second)
          frontier.push_back(c.triple);
  }

  TripleGrammar out;
  out.terminals = d.alphabet;
  out.epsilon_in_language =
      g.epsilon_in_language && d.accepting[d.initial];
  std::map<Triple, std::uint32_t> ids;
  auto triple_name = [&](const Triple& t) {
    auto [x, a_nt, z] = t;
    return "(" + std::to_string(x) + "," + g.nonterminals[a_nt] + "," +
           std::to_string(z) + ")";
  };
  // The start triple always gets an id, even when its language is empty.
  ids[start_triple] = 0;
  out.nonterminals.push_back(triple_name(start_triple));
  for (const Triple& t : reachable)
    if (!ids.count(t)) {
      ids[t] = static_cast<std::uint32_t>(out.nonterminals.size());
      out.nonterminals.push_back(triple_name(t));
    }
  out.start = 0;
  for (const Triple& t : reachable) {
    auto it = by_lhs.find(t);
    if (it == by_lhs.end()) continue;
    for (const auto& tp : it->second) {
      Production p;
      p.lhs = ids[t];
      bool ok = true;
      for (const auto& c : tp.rhs) {
        if (c.is_terminal) {
          p.rhs.push_back(term(c.terminal));
        } else if (reachable.count(c.triple)) {
          p.rhs.push_back(nt(ids[c.triple]));
        } else {
          ok = false;
          break;
        }
      }
      if (ok) out.productions.push_back(std::move(p));
    }
  }
  sort_unique(out.productions);
  return out;
}

TripleGrammar bar_hillel(const Cfg& g, const Dfa& d) {
  if (!g.unambiguous_promise)
    throw Error(ErrorCode::Unsupported,
                "intersection requires the unambiguity promise");
  return bar_hillel(normalize(g), d);
}

// ---------------------------------------------------------------------
// Counting, sampling, enumeration.

BigInt CountTable::total_in_range(std::uint32_t m, std::uint32_t n) const {
  BigInt total = 0;
  for (std::uint32_t i = m; i <= n && i <= max_len; ++i)
    total += by_length[i];
  return total;
}

CountTable count_by_length(const NormalizedCfg& g, std::uint32_t n) {
  CountTable t;
  t.max_len = n;
  const std::size_t nts = g.nonterminals.size();
  t.by_nonterminal.assign(nts, std::vector<BigInt>(n + 1, 0));
  auto piece = [&](const Sym& s, std::uint32_t len) -> BigInt {
    if (s.is_terminal) return len == 1 ? 1 : 0;
    return t.by_nonterminal[s.id][len];
  };
  for (std::uint32_t len = 1; len <= n; ++len)
    for (const auto& p : g.productions) {
      BigInt c = 0;
      if (p.rhs.size() == 1) {
        c = piece(p.rhs[0], len);
      } else {
        for (std::uint32_t split = 1; split < len; ++split)
          c += piece(p.rhs[0], split) * piece(p.rhs[1], len - split);
      }
      t.by_nonterminal[p.lhs][len] += c;
    }
  t.by_length.assign(n + 1, 0);
  t.by_length[0] = g.epsilon_in_language ? 1 : 0;
  for (std::uint32_t len = 1; len <= n; ++len)
    t.by_length[len] = nts ? t.by_nonterminal[g.start][len] : 0;
  return t;
}

namespace {

std::vector<Word> enumerate_nt(const NormalizedCfg& g, std::uint32_t nt_id,
                               std::uint32_t len,
                               std::map<std::pair<std::uint32_t, std::uint32_t>,
                                        std::vector<Word>>& memo) {
  auto key = std::make_pair(nt_id, len);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  memo[key] = {};  // cut off (spurious) recursion; filled below
  std::set<Word> words;
  auto pieces = [&](const Sym& s, std::uint32_t l) -> std::vector<Word> {
    if (s.is_terminal)
      return l == 1 ? std::vector<Word>{{s.id}} : std::vector<Word>{};
    return enumerate_nt(g, s.id, l, memo);
  };
  for (const auto& p : g.productions) {
    if (p.lhs != nt_id) continue;
    if (p.rhs.size() == 1) {
      for (auto& w : pieces(p.rhs[0], len)) words.insert(w);
    } else {
      for (std::uint32_t split = 1; split < len; ++split)
        for (const auto& l : pieces(p.rhs[0], split))
          for (const auto& r : pieces(p.rhs[1], len - split)) {
            Word w = l;
            w.insert(w.end(), r.begin(), r.end());
            words.insert(std::move(w));
          }
    }
  }
  std::vector<Word> out(words.begin(), words.end());
  memo[key] = out;
  return out;
}

}  // namespace

std::vector<Word> enumerate_words(const NormalizedCfg& g, std::uint32_t len,
                                  std::uint64_t cap) {
  if (len == 0)
    return g.epsilon_in_language ? std::vector<Word>{{}} : std::vector<Word>{};
  if (g.nonterminals.empty()) return {};
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Word>> memo;
  auto words = enumerate_nt(g, g.start, len, memo);
  if (words.size() > cap)
    throw Error(ErrorCode::CapExceeded, "enumeration exceeded cap");
  return words;
}

void ambiguity_tripwire(const NormalizedCfg& g, const CountTable& table,
                        std::uint32_t max_len, std::uint64_t word_cap) {
  for (std::uint32_t len = 1; len <= max_len && len <= table.max_len; ++len) {
    if (table.by_length[len] > word_cap) continue;
    auto words =
        enumerate_words(g, len, static_cast<std::uint64_t>(word_cap) * 4 + 4);
    if (BigInt(words.size()) != table.by_length[len])
      throw Error(ErrorCode::AmbiguityDetected,
                  "derivation count " + table.by_length[len].str() +
                      " != distinct words " + std::to_string(words.size()) +
                      " at length " + std::to_string(len));
  }
}

namespace {

// Derivation subtree sample, uniform over words of length len derived
// from nt_id. Production order, then split order, fixes the cumulative
// ranges, so streams are seed-reproducible.
void sample_exact(const NormalizedCfg& g, const CountTable& t,
                  std::uint32_t nt_id, std::uint32_t len, Rng& rng, Word& out) {
  auto piece = [&](const Sym& s, std::uint32_t l) -> BigInt {
    if (s.is_terminal) return l == 1 ? 1 : 0;
    return t.by_nonterminal[s.id][l];
  };
  BigInt u = rng.below(t.by_nonterminal[nt_id][len]);
  BigInt acc = 0;
  for (const auto& p : g.productions) {
    if (p.lhs != nt_id) continue;
    if (p.rhs.size() == 1) {
      acc += piece(p.rhs[0], len);
      if (u < acc) {
        out.push_back(p.rhs[0].id);  // length-1 RHS is always a terminal
        return;
      }
    } else {
      for (std::uint32_t split = 1; split < len; ++split) {
        acc += piece(p.rhs[0], split) * piece(p.rhs[1], len - split);
        if (u < acc) {
          if (p.rhs[0].is_terminal)
            out.push_back(p.rhs[0].id);
          else
            sample_exact(g, t, p.rhs[0].id, split, rng, out);
          if (p.rhs[1].is_terminal)
            out.push_back(p.rhs[1].id);
          else
            sample_exact(g, t, p.rhs[1].id, len - split, rng, out);
          return;
        }
      }
    }
  }
  throw Error(ErrorCode::Internal, "sample_exact ran past total count");
}

}  // namespace

Word sample_range(const NormalizedCfg& g, const CountTable& table,
                  std::uint32_t m, std::uint32_t n, Rng& rng) {
  if (n > table.max_len)
    throw Error(ErrorCode::Internal, "count table shorter than range");
  BigInt total = table.total_in_range(m, n);
  if (total == 0) throw Error(ErrorCode::EmptyRange, "no words in range");
  BigInt u = rng.below(total);
  BigInt acc = 0;
  for (std::uint32_t len = m; len <= n; ++len) {
    acc += table.by_length[len];
    if (u < acc) {
      Word out;
      if (len > 0) sample_exact(g, table, g.start, len, rng, out);
      return out;
    }
  }
  throw Error(ErrorCode::Internal, "sample_range ran past total count");
}

namespace {

// Probability of the unique derivation of w[i..i+len) from nt_id, as
// the product of the choice probabilities sample_exact would make.
Rational derivation_probability(const NormalizedCfg& g, const CountTable& t,
                                const CykTable& dp, const Word& w,
                                std::uint32_t nt_id, std::size_t i,
                                std::uint32_t len) {
  auto piece = [&](const Sym& s, std::uint32_t l) -> BigInt {
    if (s.is_terminal) return l == 1 ? 1 : 0;
    return t.by_nonterminal[s.id][l];
  };
  auto derivable = [&](const Sym& s, std::size_t at, std::uint32_t l) {
    if (s.is_terminal) return l == 1 && w[at] == s.id;
    return dp[l][at][s.id] > 0;
  };
  for (const auto& p : g.productions) {
    if (p.lhs != nt_id) continue;
    if (p.rhs.size() == 1) {
      if (derivable(p.rhs[0], i, len))
        return Rational(piece(p.rhs[0], len), t.by_nonterminal[nt_id][len]);
    } else {
      for (std::uint32_t split = 1; split < len; ++split) {
        if (!derivable(p.rhs[0], i, split) ||
            !derivable(p.rhs[1], i + split, len - split))
          continue;
        Rational choice(piece(p.rhs[0], split) * piece(p.rhs[1], len - split),
                        t.by_nonterminal[nt_id][len]);
        Rational left =
            p.rhs[0].is_terminal
                ? Rational(1)
                : derivation_probability(g, t, dp, w, p.rhs[0].id, i, split);
        Rational right = p.rhs[1].is_terminal
                             ? Rational(1)
                             : derivation_probability(g, t, dp, w, p.rhs[1].id,
                                                      i + split, len - split);
        return choice * left * right;
      }
    }
  }
  return 0;
}

}  // namespace

Rational sample_probability(const NormalizedCfg& g, const CountTable& table,
                            std::uint32_t m, std::uint32_t n, const Word& w) {
  BigInt total = table.total_in_range(m, n);
  if (total == 0 || w.size() < m || w.size() > n) return 0;
  const auto len = static_cast<std::uint32_t>(w.size());
  Rational length_choice(table.by_length[len], total);
  if (w.empty()) return g.epsilon_in_language ? length_choice : Rational(0);
  if (!parse_membership(g, w).member) return 0;
  CykTable dp = cyk(g, w);
  return length_choice *
         derivation_probability(g, table, dp, w, g.start, 0, len);
}

// ---------------------------------------------------------------------
// Prefix walk over Delta = L(i_dfa) \ L(a_gram).

PrefixWalkWeights prefix_walk_weights(const Dfa& i_dfa,
                                      const NormalizedCfg& a_gram,
                                      std::uint32_t n, const Word& prefix) {
  const std::size_t sigma = i_dfa.alphabet.size();
  PrefixWalkWeights out;
  out.per_symbol.assign(sigma, 0);

  BigInt sigma_le_n = 0;  // |Sigma^{<=n}|
  BigInt power = 1;
  for (std::uint32_t i = 0; i <= n; ++i) {
    sigma_le_n += power;
    power *= BigInt(sigma);
  }

  if (prefix.size() < n) {
    for (std::uint32_t a = 0; a < sigma; ++a) {
      Word extended = prefix;
      extended.push_back(a);
      Dfa p = Dfa::prefix(i_dfa.alphabet, extended);
      // Split Sigma^{<=n} into: words not in (sigma-a-prefixed n I),
      // counted via D'; admissible sigma-a-prefixed improvisations,
      // counted via the triple grammar; and Delta_{sigma a} itself.
      Dfa ip = product(i_dfa, p, ProductMode::And);
      TripleGrammar a_ext = bar_hillel(a_gram, ip);
      BigInt count_a = count_by_length(a_ext, n).total_in_range(0, n);
      Dfa d_prime = length_restrict(complement(ip), 0, n);
      auto count_d = count_language(d_prime);
      if (!count_d)
        throw Error(ErrorCode::Internal, "length-capped complement not finite");
      out.per_symbol[a] = sigma_le_n - count_a - *count_d;
      if (out.per_symbol[a] < 0)
        throw Error(ErrorCode::Internal, "negative branch weight");
    }
  }
  out.self =
      run(i_dfa, prefix) && !parse_membership(a_gram, prefix).member;
  out.total = out.self ? 1 : 0;
  for (const BigInt& c : out.per_symbol) out.total += c;
  return out;
}

namespace {

Word walk(const Dfa& i_dfa, std::uint32_t n, Rng& rng,
          const std::function<const PrefixWalkWeights&(const Word&)>& weights) {
  Word prefix;
  for (;;) {
    const PrefixWalkWeights& w = weights(prefix);
    if (w.total == 0)
      throw Error(ErrorCode::Internal,
                  "prefix walk reached a prefix with no completions");
    BigInt u = rng.below(w.total);
    BigInt acc = 0;
    bool extended = false;
    for (std::uint32_t a = 0; a < w.per_symbol.size(); ++a) {
      acc += w.per_symbol[a];
      if (u < acc) {
        prefix.push_back(a);
        extended = true;
        break;
      }
    }
    if (!extended) return prefix;  // picked {sigma} itself
    if (prefix.size() > n)
      throw Error(ErrorCode::Internal, "prefix walk exceeded length bound");
  }
}

}  // namespace

Word prefix_walk_sample(const Dfa& i_dfa, const NormalizedCfg& a_gram,
                        std::uint32_t n, Rng& rng) {
  std::map<Word, PrefixWalkWeights> cache;
  return walk(i_dfa, n, rng, [&](const Word& p) -> const PrefixWalkWeights& {
    auto it = cache.find(p);
    if (it == cache.end())
      it = cache.emplace(p, prefix_walk_weights(i_dfa, a_gram, n, p)).first;
    return it->second;
  });
}

PrefixWalkSampler::PrefixWalkSampler(Dfa i_dfa, NormalizedCfg a_gram,
                                     std::uint32_t n)
    : i_dfa_(std::move(i_dfa)), a_gram_(std::move(a_gram)), n_(n) {}

const PrefixWalkWeights& PrefixWalkSampler::weights(const Word& prefix) {
  auto it = cache_.find(prefix);
  if (it == cache_.end())
    it = cache_.emplace(prefix, prefix_walk_weights(i_dfa_, a_gram_, n_, prefix))
             .first;
  return it->second;
}

Word PrefixWalkSampler::draw(Rng& rng) {
  return walk(i_dfa_, n_, rng,
              [this](const Word& p) -> const PrefixWalkWeights& {
                return weights(p);
              });
}

}  // namespace ci
