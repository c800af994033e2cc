#include "ci/dfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace ci {

Dfa Dfa::universal(Alphabet alphabet) {
  Dfa d;
  d.alphabet = std::move(alphabet);
  d.state_count = 1;
  d.initial = 0;
  d.accepting = {true};
  d.delta.assign(d.alphabet.size(), 0);
  return d;
}

Dfa Dfa::prefix(Alphabet alphabet, const Word& prefix) {
  Dfa d;
  d.alphabet = std::move(alphabet);
  const std::uint32_t len = static_cast<std::uint32_t>(prefix.size());
  const std::uint32_t all = len;       // prefix consumed, any suffix
  const std::uint32_t dead = len + 1;
  d.state_count = len + 2;
  d.initial = 0;
  d.accepting.assign(d.state_count, false);
  d.accepting[all] = true;
  d.delta.assign(static_cast<std::size_t>(d.state_count) * d.alphabet.size(),
                 dead);
  for (std::uint32_t i = 0; i < len; ++i)
    d.delta[static_cast<std::size_t>(i) * d.alphabet.size() + prefix[i]] =
        i + 1;
  for (std::uint32_t s = 0; s < d.alphabet.size(); ++s)
    d.delta[static_cast<std::size_t>(all) * d.alphabet.size() + s] = all;
  return d;
}

Dfa Dfa::length_window(Alphabet alphabet, std::uint32_t m, std::uint32_t n) {
  if (m > n) throw Error(ErrorCode::MalformedInput, "length window m > n");
  Dfa d;
  d.alphabet = std::move(alphabet);
  d.state_count = n + 2;  // counts 0..n plus an overflow sink
  d.initial = 0;
  d.accepting.assign(d.state_count, false);
  for (std::uint32_t i = m; i <= n; ++i) d.accepting[i] = true;
  d.delta.assign(static_cast<std::size_t>(d.state_count) * d.alphabet.size(),
                 n + 1);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t s = 0; s < d.alphabet.size(); ++s)
      d.delta[static_cast<std::size_t>(i) * d.alphabet.size() + s] = i + 1;
  return d;
}

bool run(const Dfa& d, const Word& w) {
  std::uint32_t state = d.initial;
  for (std::uint32_t sym : w) {
    if (sym >= d.alphabet.size())
      throw Error(ErrorCode::UnknownSymbol, "symbol index out of range");
    state = d.step(state, sym);
  }
  return d.accepting[state];
}

Dfa complement(const Dfa& d) {
  Dfa c = d;
  for (std::size_t i = 0; i < c.accepting.size(); ++i)
    c.accepting[i] = !c.accepting[i];
  return c;
}

Dfa product(const Dfa& a, const Dfa& b, ProductMode mode) {
  if (a.alphabet != b.alphabet)
    throw Error(ErrorCode::AlphabetMismatch, "product of unequal alphabets");
  const Dfa& rhs_src = b;
  const std::size_t sigma = a.alphabet.size();

  Dfa out;
  out.alphabet = a.alphabet;
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  auto intern = [&](std::uint32_t x, std::uint32_t y) {
    std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | y;
    auto [it, fresh] = ids.emplace(key, static_cast<std::uint32_t>(pairs.size()));
    if (fresh) pairs.emplace_back(x, y);
    return it->second;
  };

  // Reachable-first: only BFS-visited pairs are materialized.
  out.initial = intern(a.initial, rhs_src.initial);
  std::deque<std::uint32_t> queue{out.initial};
  std::vector<std::uint32_t> delta;
  while (!queue.empty()) {
    std::uint32_t id = queue.front();
    queue.pop_front();
    auto [x, y] = pairs[id];
    for (std::uint32_t s = 0; s < sigma; ++s) {
      std::uint32_t before = static_cast<std::uint32_t>(pairs.size());
      std::uint32_t t = intern(a.step(x, s), rhs_src.step(y, s));
      if (t == before) queue.push_back(t);
      delta.push_back(t);  // row-major, matches BFS id order
    }
  }
  out.state_count = static_cast<std::uint32_t>(pairs.size());
  out.delta = std::move(delta);
  out.accepting.resize(out.state_count);
  for (std::uint32_t id = 0; id < out.state_count; ++id) {
    auto [x, y] = pairs[id];
    bool in_b = rhs_src.accepting[y];
    out.accepting[id] =
        a.accepting[x] && (mode == ProductMode::And ? in_b : !in_b);
  }
  return out;
}

Dfa length_restrict(const Dfa& a, std::uint32_t m, std::uint32_t n) {
  return product(a, Dfa::length_window(a.alphabet, m, n), ProductMode::And);
}

std::optional<PrunedDag> prune(const Dfa& d) {
  const std::size_t sigma = d.alphabet.size();

  std::vector<bool> reachable(d.state_count, false);
  std::deque<std::uint32_t> queue{d.initial};
  reachable[d.initial] = true;
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    for (std::uint32_t s = 0; s < sigma; ++s) {
      std::uint32_t t = d.step(v, s);
      if (!reachable[t]) {
        reachable[t] = true;
        queue.push_back(t);
      }
    }
  }

  // Co-reachability over the reverse transition relation.
  std::vector<std::vector<std::uint32_t>> rev(d.state_count);
  for (std::uint32_t v = 0; v < d.state_count; ++v)
    for (std::uint32_t s = 0; s < sigma; ++s) rev[d.step(v, s)].push_back(v);
  std::vector<bool> coreach(d.state_count, false);
  for (std::uint32_t v = 0; v < d.state_count; ++v)
    if (d.accepting[v] && !coreach[v]) {
      coreach[v] = true;
      queue.push_back(v);
    }
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    for (std::uint32_t u : rev[v])
      if (!coreach[u]) {
        coreach[u] = true;
        queue.push_back(u);
      }
  }

  std::vector<bool> keep(d.state_count);
  std::vector<std::uint32_t> index(d.state_count, UINT32_MAX);
  std::uint32_t kept = 0;
  for (std::uint32_t v = 0; v < d.state_count; ++v) {
    keep[v] = reachable[v] && coreach[v];
    if (keep[v]) index[v] = kept++;
  }

  PrunedDag dag;
  dag.alphabet = d.alphabet;
  if (kept == 0) {
    // Empty language: a root with no edges plus the sink.
    dag.vertex_count = 2;
    dag.root = 0;
    dag.edges.resize(2);
    dag.topo_order = {0, 1};
    return dag;
  }

  // Cycle check and topological sort restricted to kept states.
  std::vector<int> color(d.state_count, 0);
  std::vector<std::uint32_t> postorder;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;  // (state, next symbol)
  for (std::uint32_t start = 0; start < d.state_count; ++start) {
    if (!keep[start] || color[start]) continue;
    color[start] = 1;
    stack.emplace_back(start, 0);
    while (!stack.empty()) {
      auto& [v, s] = stack.back();
      if (s == sigma) {
        color[v] = 2;
        postorder.push_back(v);
        stack.pop_back();
        continue;
      }
      std::uint32_t t = d.step(v, s++);
      if (!keep[t]) continue;
      if (color[t] == 1) return std::nullopt;  // cycle survives pruning
      if (color[t] == 0) {
        color[t] = 1;
        stack.emplace_back(t, 0);
      }
    }
  }

  dag.vertex_count = kept + 1;  // + sink
  dag.root = index[d.initial];
  dag.edges.resize(dag.vertex_count);
  for (std::uint32_t v = 0; v < d.state_count; ++v) {
    if (!keep[v]) continue;
    auto& out = dag.edges[index[v]];
    for (std::uint32_t s = 0; s < sigma; ++s) {
      std::uint32_t t = d.step(v, s);
      if (keep[t]) out.emplace_back(s, index[t]);
    }
    if (d.accepting[v]) out.emplace_back(PrunedDag::kEndEdge, dag.sink());
  }
  dag.topo_order.reserve(dag.vertex_count);
  for (auto it = postorder.rbegin(); it != postorder.rend(); ++it)
    dag.topo_order.push_back(index[*it]);
  dag.topo_order.push_back(dag.sink());
  return dag;
}

PathCountTable count_paths(const PrunedDag& dag) {
  PathCountTable table;
  table.paths.assign(dag.vertex_count, 0);
  table.paths[dag.sink()] = 1;
  for (auto it = dag.topo_order.rbegin(); it != dag.topo_order.rend(); ++it) {
    std::uint32_t v = *it;
    if (v == dag.sink()) continue;
    BigInt total = 0;
    for (auto [sym, t] : dag.edges[v]) total += table.paths[t];
    table.paths[v] = std::move(total);
  }
  table.total = table.paths[dag.root];
  return table;
}

std::optional<BigInt> count_language(const Dfa& d) {
  auto dag = prune(d);
  if (!dag) return std::nullopt;
  return count_paths(*dag).total;
}

WalkSampler::WalkSampler(const Dfa& d) {
  auto dag = prune(d);
  if (!dag)
    throw Error(ErrorCode::InfiniteLanguage, "cannot sample an infinite language");
  dag_ = std::move(*dag);
  counts_ = count_paths(dag_);
  if (counts_.total == 0)
    throw Error(ErrorCode::EmptyLanguage, "cannot sample an empty language");
}

Word WalkSampler::draw(Rng& rng) const {
  Word w;
  std::uint32_t v = dag_.root;
  while (v != dag_.sink()) {
    BigInt u = rng.below(counts_.paths[v]);
    BigInt acc = 0;
    for (auto [sym, t] : dag_.edges[v]) {
      acc += counts_.paths[t];
      if (u < acc) {
        if (sym != PrunedDag::kEndEdge) w.push_back(sym);
        v = t;
        break;
      }
    }
  }
  return w;
}

Rational WalkSampler::word_probability(const Word& w) const {
  Rational p = 1;
  std::uint32_t v = dag_.root;
  for (std::uint32_t sym : w) {
    bool found = false;
    for (auto [edge_sym, t] : dag_.edges[v]) {
      if (edge_sym == sym) {
        p *= Rational(counts_.paths[t], counts_.paths[v]);
        v = t;
        found = true;
        break;
      }
    }
    if (!found) return 0;
  }
  for (auto [edge_sym, t] : dag_.edges[v])
    if (edge_sym == PrunedDag::kEndEdge)
      return p * Rational(1, counts_.paths[v]);
  return 0;
}

Dfa determinize(const Nfa& n, std::size_t subset_cap) {
  const std::size_t sigma = n.alphabet.size();
  std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
  std::vector<std::vector<std::uint32_t>> subsets;
  auto intern = [&](std::vector<std::uint32_t> subset) {
    auto [it, fresh] = ids.emplace(subset, static_cast<std::uint32_t>(subsets.size()));
    if (fresh) {
      if (subsets.size() >= subset_cap)
        throw Error(ErrorCode::StateBlowup, "subset construction exceeded cap");
      subsets.push_back(std::move(subset));
    }
    return it->second;
  };

  Dfa d;
  d.alphabet = n.alphabet;
  d.initial = intern({n.initials.begin(), n.initials.end()});
  std::deque<std::uint32_t> queue{d.initial};
  std::vector<std::uint32_t> delta;
  while (!queue.empty()) {
    std::uint32_t id = queue.front();
    queue.pop_front();
    std::vector<std::uint32_t> subset = subsets[id];
    for (std::uint32_t s = 0; s < sigma; ++s) {
      std::vector<std::uint32_t> next;
      for (std::uint32_t q : subset) {
        const auto& succ = n.delta[static_cast<std::size_t>(q) * sigma + s];
        next.insert(next.end(), succ.begin(), succ.end());
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      std::uint32_t before = static_cast<std::uint32_t>(subsets.size());
      std::uint32_t t = intern(std::move(next));
      if (t == before) queue.push_back(t);
      delta.push_back(t);
    }
  }
  d.state_count = static_cast<std::uint32_t>(subsets.size());
  d.delta = std::move(delta);
  d.accepting.resize(d.state_count);
  for (std::uint32_t id = 0; id < d.state_count; ++id) {
    bool acc = false;
    for (std::uint32_t q : subsets[id]) acc = acc || n.accepting[q];
    d.accepting[id] = acc;
  }
  return d;
}

}  // namespace ci
