#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "ci/error.hpp"
#include "ci/feasibility.hpp"
#include "ci/improviser.hpp"
#include "ci/rng.hpp"
#include "ci/simplex.hpp"
#include "util.hpp"

using namespace ci;
using namespace ci::testutil;

namespace {

Rational r(long num, long den) { return Rational(num) / den; }

// Fixed word lists standing in for a concrete scheme.
class ListOps : public SpecOperations {
 public:
  ListOps(std::vector<Word> admissible, std::vector<Word> inadmissible)
      : a_(std::move(admissible)), b_(std::move(inadmissible)) {}

  BigInt count_improvisations() override { return a_.size() + b_.size(); }
  BigInt count_admissible() override { return a_.size(); }
  Word sample_admissible(Rng& rng) override {
    return a_[static_cast<std::size_t>(rng.below_u64(a_.size()))];
  }
  Word sample_inadmissible(Rng& rng) override {
    return b_[static_cast<std::size_t>(rng.below_u64(b_.size()))];
  }

 private:
  std::vector<Word> a_;
  std::vector<Word> b_;
};

}  // namespace

TEST_CASE("running example feasibility") {
  BigInt size_i = 5, size_a = 3;

  FeasibilityReport tight = check_feasibility(size_i, size_a, 0, 0, r(1, 4));
  CHECK_FALSE(tight.feasible);
  REQUIRE(tight.violated.size() == 1);
  CHECK(tight.violated[0] == Inequality::B);
  CHECK(*tight.epsilon_opt == r(1, 4));

  CHECK(check_feasibility(size_i, size_a, 0, 0, r(1, 3)).feasible);

  FeasibilityReport ok = check_feasibility(size_i, size_a, r(1, 4), 0, r(1, 4));
  CHECK(ok.feasible);
  CHECK(*ok.epsilon_opt == r(1, 4));

  // lambda = 1/4 forces every improvisation above 1/4, impossible for 5.
  FeasibilityReport lam =
      check_feasibility(size_i, size_a, r(1, 4), r(1, 4), r(1, 4));
  CHECK_FALSE(lam.feasible);
  CHECK(lam.violated[0] == Inequality::A);
}

TEST_CASE("epsilon_opt formula and clamping") {
  CHECK(epsilon_opt(5, 3, 0, r(1, 4)) == r(1, 4));
  CHECK(epsilon_opt(5, 3, 0, r(1, 3)) == 0);     // negative clamped up
  CHECK(epsilon_opt(5, 5, 0, 1) == 0);
  CHECK(epsilon_opt(4, 0, 0, r(1, 100)) == 1);   // clamped down
  CHECK(epsilon_opt(10, 2, r(1, 8), r(1, 10)) ==
        std::max(Rational(1) - r(1, 10) * 2, r(1, 8) * 8));
  CHECK_THROWS_AS((void)epsilon_opt(0, 0, 0, 1), Error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((void)check_feasibility(2, 3, 0, 0, 1), Error);
  CHECK_THROWS_AS((void)check_feasibility(3, 2, 2, 0, 1), Error);
  CHECK_THROWS_AS((void)check_feasibility(3, 2, 0, -1, 1), Error);
}

TEST_CASE("lambda zero is vacuous, rho zero is fatal") {
  CHECK(check_feasibility(1000000, 1000000, 0, 0, 1).feasible);
  FeasibilityReport zero = check_feasibility(5, 5, 1, 0, 0);
  CHECK_FALSE(zero.feasible);  // 1/rho <= |I| unsatisfiable
}

TEST_CASE("build_improviser routes feasible and infeasible cases") {
  auto ops = std::make_shared<ListOps>(
      std::vector<Word>{{0}, {1}}, std::vector<Word>{{2}, {3}});

  BuildResult infeasible = build_improviser({0, 0, r(1, 4)}, ops);
  REQUIRE(std::holds_alternative<FeasibilityReport>(infeasible));
  CHECK_FALSE(std::get<FeasibilityReport>(infeasible).feasible);

  BuildResult feasible = build_improviser({r(1, 2), 0, r(1, 2)}, ops);
  REQUIRE(std::holds_alternative<Improviser>(feasible));
  CHECK(std::get<Improviser>(feasible).coin_bias() == 1);  // epsilon_opt = 0
}

TEST_CASE("two-list improviser hits the closed-form distribution") {
  // |I| = 5, |A| = 3, (eps, lam, rho) = (1/4, 0, 1/4): the A words get
  // probability 1/4 each, the others 1/8 each.
  std::vector<Word> a = {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}};
  std::vector<Word> b = {{0, 1, 0}, {1, 0, 0}};
  auto ops = std::make_shared<ListOps>(a, b);
  BuildResult built = build_improviser({r(1, 4), 0, r(1, 4)}, ops);
  REQUIRE(std::holds_alternative<Improviser>(built));
  const Improviser& imp = std::get<Improviser>(built);
  CHECK(imp.coin_bias() == r(3, 4));

  const std::uint64_t kDraws = 40000;
  std::map<std::string, std::uint64_t> tally;
  Rng rng(11);
  for (std::uint64_t i = 0; i < kDraws; ++i) ++tally[key_of(imp.draw(rng))];
  for (const Word& w : a) CHECK(within_4_sigma(tally[key_of(w)], kDraws, 0.25));
  for (const Word& w : b)
    CHECK(within_4_sigma(tally[key_of(w)], kDraws, 0.125));
}

TEST_CASE("rng streams are reproducible and ranges exact") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(1);
  BigInt big = BigInt(1) << 100;
  for (int i = 0; i < 50; ++i) {
    BigInt v = c.below(big);
    CHECK(v >= 0);
    CHECK(v < big);
  }
  CHECK(c.below(1) == 0);
  CHECK(c.below_u64(1) == 0);

  // Derived streams differ by index but are stable per index.
  Rng d0 = Rng::derived(7, 0), d1 = Rng::derived(7, 1), d0b = Rng::derived(7, 0);
  CHECK(d0.next_u64() == d0b.next_u64());
  CHECK(Rng::derived(7, 0).next_u64() != d1.next_u64());
}

TEST_CASE("bernoulli is exact at the endpoints and unbiased inside") {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    CHECK(bernoulli(1, rng));
    CHECK_FALSE(bernoulli(0, rng));
  }
  std::uint64_t heads = 0;
  const std::uint64_t kDraws = 40000;
  for (std::uint64_t i = 0; i < kDraws; ++i)
    if (bernoulli(r(3, 4), rng)) ++heads;
  CHECK(within_4_sigma(heads, kDraws, 0.75));
  CHECK_THROWS_AS((void)bernoulli(r(5, 4), rng), Error);
}

TEST_CASE("feasibility agrees with a word-level LP oracle") {
  // Random counts and grid parameters; the oracle asks for any
  // distribution over |I| words with the required soft coverage and
  // per-word bounds.
  std::mt19937 gen(2024);
  std::uniform_int_distribution<int> size(0, 8);
  std::vector<Rational> eps_grid = {0, r(1, 4), r(1, 3), r(1, 2), 1};
  std::vector<Rational> lam_grid = {0, r(1, 16), r(1, 8), r(1, 5)};
  std::vector<Rational> rho_grid = {r(1, 8), r(1, 5), r(1, 3), r(1, 2), 1};
  std::uniform_int_distribution<std::size_t> pick(0, 100);

  for (int trial = 0; trial < 300; ++trial) {
    int ni = size(gen);
    std::uniform_int_distribution<int> sub(0, ni);
    int na = sub(gen);
    Rational eps = eps_grid[pick(gen) % eps_grid.size()];
    Rational lam = lam_grid[pick(gen) % lam_grid.size()];
    Rational rho = rho_grid[pick(gen) % rho_grid.size()];
    if (lam > rho) continue;

    FeasibilityReport report = check_feasibility(ni, na, eps, lam, rho);

    RationalLp lp;
    lp.num_vars = static_cast<std::size_t>(ni);
    LinearConstraint total{std::vector<Rational>(lp.num_vars, 1), Relation::Eq,
                           1};
    lp.constraints.push_back(total);
    LinearConstraint cover{std::vector<Rational>(lp.num_vars, 0), Relation::Ge,
                           1 - eps};
    for (int w = 0; w < na; ++w) cover.coeffs[w] = 1;
    lp.constraints.push_back(cover);
    for (int w = 0; w < ni; ++w) {
      LinearConstraint lo{std::vector<Rational>(lp.num_vars, 0), Relation::Ge,
                          lam};
      lo.coeffs[w] = 1;
      lp.constraints.push_back(lo);
      LinearConstraint hi{std::vector<Rational>(lp.num_vars, 0), Relation::Le,
                          rho};
      hi.coeffs[w] = 1;
      lp.constraints.push_back(hi);
    }
    bool oracle = solve_lp(lp).has_value();
    CHECK(report.feasible == oracle);
  }
}
