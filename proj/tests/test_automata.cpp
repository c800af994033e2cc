#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>

#include "ci/dfa.hpp"
#include "ci/error.hpp"
#include "util.hpp"

using namespace ci;
using namespace ci::testutil;

namespace {

// No two consecutive 1s over {0,1} (states: fresh, just-saw-1, dead).
Dfa no11() {
  Dfa d;
  d.alphabet = binary_alphabet();
  d.state_count = 3;
  d.initial = 0;
  d.accepting = {true, true, false};
  d.delta = {0, 1, 0, 2, 2, 2};
  return d;
}

Nfa random_nfa(std::mt19937& gen, std::uint32_t max_states) {
  std::uniform_int_distribution<std::uint32_t> nstates(1, max_states);
  Nfa n;
  n.alphabet = binary_alphabet();
  n.state_count = nstates(gen);
  std::uniform_int_distribution<std::uint32_t> state(0, n.state_count - 1);
  std::bernoulli_distribution flag(0.4);
  n.initials.insert(state(gen));
  for (std::uint32_t q = 0; q < n.state_count; ++q)
    n.accepting.push_back(flag(gen));
  n.delta.resize(std::size_t(n.state_count) * 2);
  for (auto& succ : n.delta) {
    for (std::uint32_t q = 0; q < n.state_count; ++q)
      if (flag(gen)) succ.push_back(q);
  }
  return n;
}

bool nfa_accepts(const Nfa& n, const Word& w) {
  std::set<std::uint32_t> cur = n.initials;
  for (std::uint32_t sym : w) {
    std::set<std::uint32_t> next;
    for (std::uint32_t q : cur)
      for (std::uint32_t t : n.delta[std::size_t(q) * 2 + sym])
        next.insert(t);
    cur = std::move(next);
  }
  for (std::uint32_t q : cur)
    if (n.accepting[q]) return true;
  return false;
}

}  // namespace

TEST_CASE("factory automata have the advertised languages") {
  Alphabet bin = binary_alphabet();
  Dfa uni = Dfa::universal(bin);
  Dfa pre = Dfa::prefix(bin, {1, 0});
  Dfa win = Dfa::length_window(bin, 2, 3);
  for (const Word& w : all_words(2, 0, 4)) {
    CHECK(run(uni, w));
    bool has_prefix = w.size() >= 2 && w[0] == 1 && w[1] == 0;
    CHECK(run(pre, w) == has_prefix);
    CHECK(run(win, w) == (w.size() >= 2 && w.size() <= 3));
  }
}

TEST_CASE("complement and products match set algebra") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 30; ++trial) {
    Dfa a = random_dfa(gen, 5);
    Dfa b = random_dfa(gen, 5);
    Dfa not_a = complement(a);
    Dfa a_and_b = product(a, b, ProductMode::And);
    Dfa a_diff_b = product(a, b, ProductMode::Diff);
    for (const Word& w : all_words(2, 0, 4)) {
      CHECK(run(not_a, w) == !run(a, w));
      CHECK(run(a_and_b, w) == (run(a, w) && run(b, w)));
      CHECK(run(a_diff_b, w) == (run(a, w) && !run(b, w)));
    }
  }
}

TEST_CASE("length restriction slices the language") {
  Dfa d = no11();
  Dfa sliced = length_restrict(d, 2, 3);
  for (const Word& w : all_words(2, 0, 5))
    CHECK(run(sliced, w) == (run(d, w) && w.size() >= 2 && w.size() <= 3));
}

TEST_CASE("prune flags infinite languages and drops dead states") {
  CHECK_FALSE(prune(no11()).has_value());  // cyclic: infinite language
  CHECK(count_language(no11()) == std::nullopt);

  Dfa empty = no11();
  empty.accepting = {false, false, false};
  auto dag = prune(empty);
  REQUIRE(dag.has_value());
  CHECK(count_paths(*dag).total == 0);
  CHECK(count_language(empty) == BigInt(0));

  Dfa window = length_restrict(no11(), 3, 3);
  CHECK(count_language(window) == BigInt(5));
}

TEST_CASE("counting matches enumeration on random DFAs") {
  std::mt19937 gen(99);
  for (int trial = 0; trial < 40; ++trial) {
    Dfa d = length_restrict(random_dfa(gen, 8), 0, 6);
    auto count = count_language(d);
    REQUIRE(count.has_value());
    CHECK(*count == BigInt(language_of(d, 0, 6).size()));
  }
}

TEST_CASE("walk sampler gives every word probability 1/|L| exactly") {
  std::mt19937 gen(5);
  int nonempty = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Dfa d = length_restrict(random_dfa(gen, 6), 0, 5);
    std::vector<Word> lang = language_of(d, 0, 5);
    if (lang.empty()) {
      CHECK_THROWS_AS(WalkSampler{d}, Error);
      continue;
    }
    ++nonempty;
    WalkSampler sampler(d);
    CHECK(sampler.language_size() == BigInt(lang.size()));
    Rational uniform = Rational(1) / lang.size();
    for (const Word& w : lang) CHECK(sampler.word_probability(w) == uniform);
    Word outside(6, 0);
    CHECK(sampler.word_probability(outside) == 0);
  }
  CHECK(nonempty > 5);  // the suite actually exercised the sampler
}

TEST_CASE("walk sampler draws are uniform within 4 sigma") {
  Dfa d = length_restrict(no11(), 3, 3);
  WalkSampler sampler(d);
  std::vector<Word> lang = language_of(d, 3, 3);
  REQUIRE(lang.size() == 5);

  const std::uint64_t kDraws = 50000;
  std::map<std::string, std::uint64_t> tally;
  Rng rng(13);
  for (std::uint64_t i = 0; i < kDraws; ++i) ++tally[key_of(sampler.draw(rng))];
  CHECK(tally.size() == 5);
  for (const Word& w : lang)
    CHECK(within_4_sigma(tally[key_of(w)], kDraws, 0.2));
}

TEST_CASE("sampler rejects empty and infinite languages") {
  Dfa inf = no11();
  CHECK_THROWS_WITH_AS(WalkSampler{inf}, doctest::Contains("INFINITE"), Error);

  Dfa empty = length_restrict(no11(), 3, 3);
  empty.accepting.assign(empty.accepting.size(), false);
  try {
    WalkSampler s(empty);
    FAIL("expected EmptyLanguage");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyLanguage);
  }
}

TEST_CASE("determinize preserves the language") {
  std::mt19937 gen(31);
  for (int trial = 0; trial < 30; ++trial) {
    Nfa n = random_nfa(gen, 5);
    Dfa d = determinize(n);
    for (const Word& w : all_words(2, 0, 5))
      CHECK(run(d, w) == nfa_accepts(n, w));
  }
}

TEST_CASE("determinize enforces the subset cap") {
  std::mt19937 gen(77);
  Nfa n = random_nfa(gen, 6);
  CHECK_THROWS_AS((void)determinize(n, 1), Error);
}
