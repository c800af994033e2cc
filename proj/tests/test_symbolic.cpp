#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "ci/error.hpp"
#include "ci/sat.hpp"
#include "ci/symbolic.hpp"
#include "util.hpp"

using namespace ci;
using namespace ci::testutil;

namespace {

// State bit 1: violation seen; state bit 2: previous input was 1.
SymbolicAutomaton no11_saut() {
  SymbolicAutomaton a;
  a.state_bits = 2;
  a.input_bits = 1;
  a.init = {{-1}, {-2}};
  a.acc = {{-1}};
  a.delta = {{-1, 4}, {-2, -3, 4}, {-4, 1, 2}, {-4, 1, 3}, {-3, 5}, {3, -5}};
  return a;
}

// Length-3 bit words within Hamming distance 1 of 001.
SymbolicSpec ham001_spec() {
  SymbolicSpec s;
  s.bits_per_symbol = 1;
  s.length = 3;
  s.cnf.num_vars = 3;
  s.cnf.clauses = {{-1, -2}, {-1, 3}, {-2, 3}};
  s.projected = {1, 2, 3};
  return s;
}

Cnf random_cnf(std::mt19937& gen, int max_vars, int max_clauses) {
  std::uniform_int_distribution<int> nv(1, max_vars), nc(0, max_clauses);
  Cnf cnf;
  cnf.num_vars = nv(gen);
  std::uniform_int_distribution<int> var(1, cnf.num_vars), width(1, 3);
  std::bernoulli_distribution sign(0.5);
  int clauses = nc(gen);
  for (int i = 0; i < clauses; ++i) {
    Clause c;
    int w = width(gen);
    for (int j = 0; j < w; ++j) {
      int v = var(gen);
      c.push_back(sign(gen) ? v : -v);
    }
    cnf.clauses.push_back(std::move(c));
  }
  return cnf;
}

bool brute_satisfies(const Cnf& cnf, std::uint32_t bits) {
  for (const Clause& c : cnf.clauses) {
    bool sat = false;
    for (Lit l : c) {
      bool val = (bits >> (std::abs(l) - 1)) & 1u;
      if ((l > 0) == val) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::uint64_t brute_count(const Cnf& cnf) {
  std::uint64_t n = 0;
  for (std::uint32_t bits = 0; bits < (1u << cnf.num_vars); ++bits)
    if (brute_satisfies(cnf, bits)) ++n;
  return n;
}

}  // namespace

TEST_CASE("builtin solver agrees with brute force") {
  std::mt19937 gen(3);
  auto solver = make_builtin_solver();
  for (int trial = 0; trial < 200; ++trial) {
    Cnf cnf = random_cnf(gen, 8, 12);
    auto result = solver->solve(cnf);
    CHECK(result.has_value() == (brute_count(cnf) > 0));
    if (result) {
      std::uint32_t bits = 0;
      for (int v = 1; v <= cnf.num_vars; ++v)
        if ((*result)[v]) bits |= 1u << (v - 1);
      CHECK(brute_satisfies(cnf, bits));
    }
  }
}

TEST_CASE("xor constraints cut the model set by parity") {
  std::mt19937 gen(9);
  for (int trial = 0; trial < 40; ++trial) {
    Cnf base = random_cnf(gen, 6, 6);
    std::uniform_int_distribution<int> var(1, base.num_vars);
    std::bernoulli_distribution coin(0.5);
    std::vector<Lit> lits;
    for (int v = 1; v <= base.num_vars; ++v)
      if (coin(gen)) lits.push_back(v);
    bool parity = coin(gen);

    Cnf constrained = base;
    add_xor_constraint(constrained, lits, parity);

    // Models of the constrained CNF, projected onto the original vars,
    // must be exactly the base models with matching parity.
    std::set<std::uint32_t> expect;
    for (std::uint32_t bits = 0; bits < (1u << base.num_vars); ++bits) {
      if (!brute_satisfies(base, bits)) continue;
      bool p = false;
      for (Lit l : lits)
        if ((bits >> (l - 1)) & 1u) p = !p;
      if (p == parity) expect.insert(bits);
    }
    std::set<std::uint32_t> got;
    for (std::uint64_t ext = 0; ext < (1ull << constrained.num_vars); ++ext) {
      if (!brute_satisfies(constrained, static_cast<std::uint32_t>(ext)))
        continue;
      got.insert(static_cast<std::uint32_t>(ext) &
                 ((1u << base.num_vars) - 1));
    }
    CHECK(got == expect);
  }
}

TEST_CASE("long xor chains keep width at most 5") {
  Cnf cnf;
  cnf.num_vars = 9;
  std::vector<Lit> lits = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  add_xor_constraint(cnf, lits, true);
  for (const Clause& c : cnf.clauses) CHECK(c.size() <= 5);
}

TEST_CASE("unrolled no-11 automaton has projected count 5") {
  auto solver = make_builtin_solver();
  SymbolicSpec spec = unroll(no11_saut(), 3);
  CHECK(spec.alphabet_size() == 2);
  CHECK(projected_count_exact(spec, *solver) == 5);

  std::vector<Word> models = enumerate_projected(spec, *solver, 100);
  std::set<Word> expect = {
      {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 0, 1}};
  CHECK(std::set<Word>(models.begin(), models.end()) == expect);

  for (const Word& w : all_words(2, 3, 3))
    CHECK(is_member(spec, w, *solver) == (expect.count(w) > 0));
}

TEST_CASE("conjoin intersects projected languages") {
  auto solver = make_builtin_solver();
  SymbolicSpec hard = unroll(no11_saut(), 3);
  SymbolicSpec both = conjoin(hard, ham001_spec());
  CHECK(projected_count_exact(both, *solver) == 3);
  std::vector<Word> models = enumerate_projected(both, *solver, 100);
  std::set<Word> expect = {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}};
  CHECK(std::set<Word>(models.begin(), models.end()) == expect);

  SymbolicSpec wrong = ham001_spec();
  wrong.length = 2;
  wrong.projected = {1, 2};
  CHECK_THROWS_AS((void)conjoin(hard, wrong), Error);
}

TEST_CASE("projected counting respects the cap") {
  auto solver = make_builtin_solver();
  SymbolicSpec spec = unroll(no11_saut(), 3);
  try {
    (void)projected_count_exact(spec, *solver, 2);
    FAIL("expected CapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapExceeded);
  }
}

TEST_CASE("approximate sampler pivots and stays within the band") {
  auto solver = make_builtin_solver();
  SymbolicSpec spec = unroll(no11_saut(), 3);  // 5 words

  ApproxSampler exact(spec, Rational(1, 2), *solver);
  CHECK(exact.pivot() == 18);
  ApproxSampler hashed(spec, Rational(2), *solver);
  CHECK(hashed.pivot() == 5);

  const std::uint64_t kDraws = 20000;
  for (const ApproxSampler* sampler : {&exact, &hashed}) {
    double tau = sampler == &exact ? 0.5 : 2.0;
    std::map<std::string, std::uint64_t> tally;
    Rng rng(101);
    for (std::uint64_t i = 0; i < kDraws; ++i)
      ++tally[key_of(sampler->draw(rng))];
    CHECK(tally.size() == 5);
    for (const auto& [word, count] : tally) {
      double f = static_cast<double>(count) / kDraws;
      double lo = (1.0 / (1.0 + tau)) / 5.0;
      double hi = (1.0 + tau) / 5.0;
      double sigma = std::sqrt(0.2 * 0.8 / kDraws);
      CHECK(f >= lo - 4 * sigma);
      CHECK(f <= hi + 4 * sigma);
    }
  }
}

TEST_CASE("hashing engages when the language exceeds the pivot") {
  // All 16 length-4 bit words; pivot 5 forces parity constraints.
  SymbolicAutomaton all;
  all.state_bits = 1;
  all.input_bits = 1;
  all.init = {{-1}};
  all.delta = {{-3}};  // next state stays false; input free
  auto solver = make_builtin_solver();
  SymbolicSpec spec = unroll(all, 4);
  CHECK(projected_count_exact(spec, *solver) == 16);

  ApproxSampler sampler(spec, Rational(2), *solver);
  REQUIRE(sampler.pivot() == 5);
  const std::uint64_t kDraws = 20000;
  std::map<std::string, std::uint64_t> tally;
  Rng rng(202);
  for (std::uint64_t i = 0; i < kDraws; ++i)
    ++tally[key_of(sampler.draw(rng))];
  CHECK(tally.size() == 16);
  double sigma = std::sqrt((1.0 / 16) * (15.0 / 16) / kDraws);
  for (const auto& [word, count] : tally) {
    double f = static_cast<double>(count) / kDraws;
    CHECK(f >= (1.0 / 3.0) / 16.0 - 4 * sigma);
    CHECK(f <= 3.0 / 16.0 + 4 * sigma);
  }
}

TEST_CASE("symbolic improviser obeys hard and mostly soft") {
  auto solver = make_builtin_solver();
  SymbolicSpec hard = unroll(no11_saut(), 3);
  SymbolicSpec soft = ham001_spec();
  Rational eps(1, 4);
  SymbolicImproviser imp(hard, soft, eps, Rational(1, 2), *solver);

  std::set<Word> i_set = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 0, 1}};
  std::set<Word> a_set = {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}};
  const std::uint64_t kDraws = 4000;
  std::uint64_t admissible = 0;
  Rng rng(55);
  for (std::uint64_t i = 0; i < kDraws; ++i) {
    Word w = imp.draw(rng);
    REQUIRE(i_set.count(w) == 1);
    if (a_set.count(w)) ++admissible;
  }
  // A-branch with probability 3/4, plus 3/5 of the I-branch.
  CHECK(within_4_sigma(admissible, kDraws, 0.75 + 0.25 * 0.6));
}

TEST_CASE("external solver path via a scripted back end") {
  // A tiny DIMACS brute-forcer standing in for a real solver.
  std::string script = "/tmp/ci_test_fake_solver.py";
  {
    std::ofstream f(script);
    f << "#!/usr/bin/env python3\n"
         "import itertools, sys\n"
         "vars_, clauses = 0, []\n"
         "for line in open(sys.argv[1]):\n"
         "    t = line.split()\n"
         "    if not t or t[0] == 'c':\n"
         "        continue\n"
         "    if t[0] == 'p':\n"
         "        vars_ = int(t[2])\n"
         "        continue\n"
         "    clauses.append([int(x) for x in t[:-1]])\n"
         "for bits in itertools.product([False, True], repeat=vars_):\n"
         "    if all(any((l > 0) == bits[abs(l) - 1] for l in c)\n"
         "           for c in clauses):\n"
         "        print('s SATISFIABLE')\n"
         "        print('v ' + ' '.join(str(i + 1 if b else -(i + 1))\n"
         "                              for i, b in enumerate(bits)) + ' 0')\n"
         "        sys.exit(10)\n"
         "print('s UNSATISFIABLE')\n"
         "sys.exit(20)\n";
  }
  auto external = make_external_solver("python3 " + script);
  auto builtin = make_builtin_solver();
  std::mt19937 gen(13);
  for (int trial = 0; trial < 10; ++trial) {
    Cnf cnf = random_cnf(gen, 5, 8);
    CHECK(external->solve(cnf).has_value() == builtin->solve(cnf).has_value());
  }
  SymbolicSpec spec = unroll(no11_saut(), 3);
  CHECK(projected_count_exact(spec, *external) == 5);
  std::remove(script.c_str());
}
