#ifndef CI_IMPROVISER_HPP
#define CI_IMPROVISER_HPP

#include <functional>
#include <memory>
#include <variant>

#include "ci/feasibility.hpp"
#include "ci/rng.hpp"
#include "ci/word.hpp"

namespace ci {

/// Uniform sampler over a finite set of words.
using Sampler = std::function<Word(Rng&)>;

/// Randomness parameters of a CI instance.
struct Params {
  Rational epsilon;
  Rational lambda;
  Rational rho;
};

/// The five abstract specification operations, already applied to a
/// concrete instance: the counts of I and A plus uniform samplers over
/// A and I \ A. Each scheme (DFA x DFA, UCFG x DFA, DFA x UCFG)
/// provides its own implementation.
class SpecOperations {
 public:
  virtual ~SpecOperations() = default;
  virtual BigInt count_improvisations() = 0;        // |I|
  virtual BigInt count_admissible() = 0;            // |A|
  virtual Word sample_admissible(Rng& rng) = 0;     // uniform over A
  virtual Word sample_inadmissible(Rng& rng) = 0;   // uniform over I \ A
};

/// Two-list improviser: flips a coin with bias 1 - epsilon_opt and
/// samples uniformly from A on heads, from I \ A on tails. Output
/// probability is (1-epsilon_opt)/|A| on A and epsilon_opt/|I\A|
/// elsewhere, each within [lambda, rho].
class Improviser {
 public:
  Improviser(Rational coin_bias, Sampler sample_a, Sampler sample_b)
      : coin_bias_(std::move(coin_bias)),
        sample_a_(std::move(sample_a)),
        sample_b_(std::move(sample_b)) {}

  const Rational& coin_bias() const { return coin_bias_; }

  Word draw(Rng& rng) const;

 private:
  Rational coin_bias_;  // probability of the A branch, = 1 - epsilon_opt
  Sampler sample_a_;
  Sampler sample_b_;  // unused when coin_bias == 1
};

using BuildResult = std::variant<Improviser, FeasibilityReport>;

/// Runs the feasibility check and, when feasible, assembles the
/// two-list improviser. On infeasible input returns the report.
BuildResult build_improviser(const Params& params,
                             std::shared_ptr<SpecOperations> ops);

}  // namespace ci

#endif
